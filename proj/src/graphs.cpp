#include "prodmin/graphs.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace prodmin {

int Digraph::add_node(std::string name) {
    if (!name.empty() || !node_names.empty()) {
        node_names.resize(node_count);
        node_names.push_back(std::move(name));
    }
    return node_count++;
}

int Digraph::add_arc(int from, int to, std::string name, double weight) {
    if (name.empty()) name = "a" + std::to_string(arcs.size());
    arcs.push_back({std::move(name), from, to, weight});
    return static_cast<int>(arcs.size()) - 1;
}

int Digraph::find_arc(std::string_view name) const {
    for (size_t k = 0; k < arcs.size(); ++k)
        if (arcs[k].name == name) return static_cast<int>(k);
    return -1;
}

int Digraph::find_node(std::string_view name) const {
    for (size_t k = 0; k < node_names.size(); ++k)
        if (node_names[k] == name) return static_cast<int>(k);
    return -1;
}

std::string Digraph::node_label(int v) const {
    if (v < static_cast<int>(node_names.size()) && !node_names[v].empty()) return node_names[v];
    return std::to_string(v);
}

Vec Digraph::weights() const {
    Vec w(arc_count());
    for (int k = 0; k < arc_count(); ++k) w[k] = arcs[k].weight;
    return w;
}

void Digraph::check() const {
    std::set<std::string_view> names;
    for (const auto& a : arcs) {
        if (a.alpha < 0 || a.alpha >= node_count || a.beta < 0 || a.beta >= node_count)
            throw Error(Errc::BadData, "arc " + a.name + " has an endpoint out of range");
        if (!(a.weight > 0.0)) throw Error(Errc::BadData, "arc " + a.name + " has non-positive weight");
        if (!names.insert(a.name).second) throw Error(Errc::BadData, "duplicate arc name " + a.name);
    }
}

StrongDecomposition strong_components(const Digraph& g) {
    const int n = g.node_count;
    std::vector<std::vector<int>> out(n);
    for (int k = 0; k < g.arc_count(); ++k) out[g.arcs[k].alpha].push_back(g.arcs[k].beta);

    StrongDecomposition sd;
    sd.component.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    int counter = 0;

    // iterative Tarjan
    std::vector<std::pair<int, size_t>> call;
    for (int s = 0; s < n; ++s) {
        if (index[s] >= 0) continue;
        call.push_back({s, 0});
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < out[v].size()) {
                int w = out[v][pos++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<int> comp;
                for (;;) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    sd.component[w] = sd.count;
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                sd.members.push_back(std::move(comp));
                ++sd.count;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }

    std::set<std::pair<int, int>> edges;
    sd.relevant.assign(g.arc_count(), false);
    for (int k = 0; k < g.arc_count(); ++k) {
        int ca = sd.component[g.arcs[k].alpha], cb = sd.component[g.arcs[k].beta];
        if (ca == cb)
            sd.relevant[k] = true;
        else
            edges.insert({ca, cb});
    }
    sd.dag_edges.assign(edges.begin(), edges.end());
    std::vector<bool> has_out(sd.count, false);
    for (auto [a, b] : sd.dag_edges) has_out[a] = true;
    for (int c = 0; c < sd.count; ++c)
        if (!has_out[c]) sd.final_components.push_back(c);
    return sd;
}

bool is_strongly_connected(const Digraph& g) {
    if (g.node_count == 0) return false;
    return strong_components(g).count == 1;
}

bool is_eulerian(const Digraph& g) {
    if (!is_strongly_connected(g)) return false;
    std::vector<int> din(g.node_count, 0), dout(g.node_count, 0);
    for (const auto& a : g.arcs) {
        ++dout[a.alpha];
        ++din[a.beta];
    }
    return din == dout;
}

namespace {

// shortest path from src to any node accepted by `stop`, moving along arcs
// accepted by `use`, not expanding nodes accepted by `stop`
std::vector<int> bfs_path(const Digraph& g, const std::vector<std::vector<int>>& out, int src,
                          const std::function<bool(int)>& stop,
                          const std::function<bool(int)>& use) {
    std::vector<int> via(g.node_count, -2);
    std::deque<int> q{src};
    via[src] = -1;
    int hit = stop(src) ? src : -1;
    while (!q.empty() && hit < 0) {
        int v = q.front();
        q.pop_front();
        for (int a : out[v]) {
            if (!use(a)) continue;
            int w = g.arcs[a].beta;
            if (via[w] != -2) continue;
            via[w] = a;
            if (stop(w)) {
                hit = w;
                break;
            }
            q.push_back(w);
        }
    }
    if (hit < 0) return {-1};
    std::vector<int> path;
    for (int v = hit; via[v] >= 0; v = g.arcs[via[v]].alpha) path.push_back(via[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

CircuitBasis circuit_basis(const Digraph& g) {
    auto sd = strong_components(g);
    std::vector<std::vector<int>> out(g.node_count);
    for (int k = 0; k < g.arc_count(); ++k)
        if (sd.relevant[k]) out[g.arcs[k].alpha].push_back(k);

    CircuitBasis basis;
    std::vector<bool> node_cov(g.node_count, false), arc_cov(g.arc_count(), false);
    for (int c = 0; c < sd.count; ++c) {
        std::vector<int> arcs;
        for (int v : sd.members[c])
            for (int a : out[v]) arcs.push_back(a);
        if (arcs.empty()) continue;

        auto cover = [&](const std::vector<int>& circ) {
            for (int a : circ) {
                arc_cov[a] = true;
                node_cov[g.arcs[a].alpha] = node_cov[g.arcs[a].beta] = true;
            }
            basis.circuits.push_back(circ);
        };
        auto close_path = [&](int from, int to) {
            if (from == to) return std::vector<int>{};
            return bfs_path(
                g, out, from, [&](int v) { return v == to; },
                [&](int a) { return static_cast<bool>(arc_cov[a]); });
        };

        int a0 = arcs[0];
        for (int a : arcs)
            if (g.arcs[a].alpha == g.arcs[a].beta) {
                a0 = a;
                break;
            }
        std::vector<int> first{a0};
        if (g.arcs[a0].alpha != g.arcs[a0].beta) {
            int u = g.arcs[a0].alpha;
            auto p = bfs_path(
                g, out, g.arcs[a0].beta, [&](int v) { return v == u; },
                [](int) { return true; });
            first.insert(first.end(), p.begin(), p.end());
        }
        cover(first);

        for (;;) {
            int a = -1;
            for (int b : arcs)
                if (!arc_cov[b] && node_cov[g.arcs[b].alpha]) {
                    a = b;
                    break;
                }
            if (a < 0) break;
            std::vector<int> circ{a};
            int end = g.arcs[a].beta;
            if (!node_cov[end]) {
                auto p = bfs_path(
                    g, out, end, [&](int v) { return static_cast<bool>(node_cov[v]); },
                    [](int) { return true; });
                circ.insert(circ.end(), p.begin(), p.end());
                end = g.arcs[circ.back()].beta;
            }
            auto back = close_path(end, g.arcs[a].alpha);
            circ.insert(circ.end(), back.begin(), back.end());
            cover(circ);
        }
    }
    basis.targets.assign(basis.circuits.size(), 1.0);
    return basis;
}

Mat incidence_matrix(const Digraph& g, const CircuitBasis& basis) {
    Mat L = Mat::Zero(basis.size(), g.arc_count());
    for (int j = 0; j < basis.size(); ++j)
        for (int a : basis.circuits[j]) L(j, a) = 1.0;
    return L;
}

bool is_circuit(const Digraph& g, const std::vector<int>& arcs) {
    if (arcs.empty()) return false;
    std::set<int> seen;
    std::map<int, int> balance;
    for (int a : arcs) {
        if (a < 0 || a >= g.arc_count() || !seen.insert(a).second) return false;
        ++balance[g.arcs[a].alpha];
        --balance[g.arcs[a].beta];
    }
    for (auto [v, b] : balance)
        if (b != 0) return false;
    // weak connectivity of the touched nodes
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (auto& [v, b] : balance) parent[v] = v;
    for (int a : arcs) parent[find(g.arcs[a].alpha)] = find(g.arcs[a].beta);
    int root = find(balance.begin()->first);
    for (auto& [v, b] : balance)
        if (find(v) != root) return false;
    return true;
}

void check_basis(const Digraph& g, const CircuitBasis& basis) {
    if (basis.targets.size() != basis.circuits.size())
        throw Error(Errc::BadData, "circuit and target counts differ");
    for (int j = 0; j < basis.size(); ++j) {
        if (!is_circuit(g, basis.circuits[j]))
            throw Error(Errc::BadData, "constraint " + std::to_string(j) + " is not a circuit");
        if (!(basis.targets[j] > 0.0))
            throw Error(Errc::BadData, "constraint " + std::to_string(j) + " has non-positive target");
    }
    if (basis.size() == 0) return;
    Mat L = incidence_matrix(g, basis);
    Eigen::ColPivHouseholderQR<Mat> qr(L.transpose());
    qr.setThreshold(kRankTol);
    if (qr.rank() < basis.size()) throw Error(Errc::RankDeficient, "circuits are dependent");
}

std::vector<std::vector<int>> enumerate_cycles(const Digraph& g, std::size_t cap) {
    const int n = g.node_count;
    std::vector<std::vector<int>> out(n), result;
    for (int k = 0; k < g.arc_count(); ++k) out[g.arcs[k].alpha].push_back(k);

    std::vector<bool> blocked(n);
    std::vector<std::set<int>> B(n);
    std::vector<int> stack;
    int s = 0;

    std::function<void(int)> unblock = [&](int u) {
        blocked[u] = false;
        auto waiting = std::move(B[u]);
        B[u].clear();
        for (int w : waiting)
            if (blocked[w]) unblock(w);
    };
    std::function<bool(int)> circuit = [&](int v) -> bool {
        bool found = false;
        blocked[v] = true;
        for (int a : out[v]) {
            int w = g.arcs[a].beta;
            if (w < s) continue;
            if (w == s) {
                stack.push_back(a);
                if (result.size() >= cap) throw Error(Errc::CapExceeded, "cycle enumeration cap exceeded");
                result.push_back(stack);
                stack.pop_back();
                found = true;
            } else if (!blocked[w]) {
                stack.push_back(a);
                if (circuit(w)) found = true;
                stack.pop_back();
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int a : out[v]) {
                int w = g.arcs[a].beta;
                if (w >= s) B[w].insert(v);
            }
        }
        return found;
    };
    for (s = 0; s < n; ++s) {
        for (int v = s; v < n; ++v) {
            blocked[v] = false;
            B[v].clear();
        }
        circuit(s);
    }
    return result;
}

std::vector<std::vector<int>> enumerate_circuits(const Digraph& g, std::size_t cap) {
    const int m = g.arc_count();
    std::vector<std::vector<int>> out(g.node_count), result;
    for (int k = 0; k < m; ++k) out[g.arcs[k].alpha].push_back(k);
    std::vector<bool> used(m, false);
    std::vector<int> path;
    std::set<std::vector<int>> seen;

    // a circuit is an arc set admitting a closed walk; it is listed once, as
    // the first such walk found, starting at its smallest arc
    std::function<void(int, int, int)> extend = [&](int first, int start, int v) {
        if (v == start) {
            std::vector<int> key = path;
            std::sort(key.begin(), key.end());
            if (seen.insert(std::move(key)).second) {
                if (result.size() >= cap) throw Error(Errc::CapExceeded, "circuit enumeration cap exceeded");
                result.push_back(path);
            }
        }
        for (int a : out[v]) {
            if (a <= first || used[a]) continue;
            used[a] = true;
            path.push_back(a);
            extend(first, start, g.arcs[a].beta);
            path.pop_back();
            used[a] = false;
        }
    };
    for (int a = 0; a < m; ++a) {
        used[a] = true;
        path = {a};
        extend(a, g.arcs[a].alpha, g.arcs[a].beta);
        used[a] = false;
    }
    return result;
}

std::uint64_t count_cycles_complete(int n, bool loops) {
    if (n < 0) throw Error(Errc::BadData, "negative node count");
    // sum_{k>=2} C(n,k) (k-1)!  =  sum_k (n)_k / k
    unsigned __int128 total = 0, falling = n;  // (n)_1
    for (int k = 2; k <= n; ++k) {
        falling *= static_cast<unsigned>(n - k + 1);
        total += falling / static_cast<unsigned>(k);
        if (total > std::numeric_limits<std::uint64_t>::max())
            throw Error(Errc::BadData, "cycle count overflows 64 bits");
    }
    if (loops) total += static_cast<unsigned>(n);
    return static_cast<std::uint64_t>(total);
}

Digraph complete_digraph(int n, bool loops) {
    Digraph g;
    for (int v = 0; v < n; ++v) g.add_node();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j || loops) g.add_arc(i, j, "e" + std::to_string(i) + "_" + std::to_string(j));
    return g;
}

Digraph directed_cycle(int n) {
    Digraph g;
    for (int v = 0; v < n; ++v) g.add_node();
    for (int v = 0; v < n; ++v) g.add_arc(v, (v + 1) % n);
    return g;
}

Digraph functional_graph(const std::vector<int>& map) {
    Digraph g;
    for (size_t v = 0; v < map.size(); ++v) g.add_node();
    for (size_t v = 0; v < map.size(); ++v) g.add_arc(static_cast<int>(v), map[v]);
    return g;
}

int cyclic_node_count(const std::vector<int>& map) {
    const int n = static_cast<int>(map.size());
    std::vector<int> mark(n, -1);
    int cyclic = 0;
    for (int s = 0; s < n; ++s) {
        int v = s;
        while (mark[v] < 0) {
            mark[v] = s;
            v = map[v];
        }
        if (mark[v] == s) {
            int u = v;
            do {
                ++cyclic;
                u = map[u];
            } while (u != v);
        }
    }
    return cyclic;
}

}  // namespace prodmin
