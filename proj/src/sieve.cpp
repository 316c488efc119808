#include "nettomo/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "nettomo/errors.hpp"

namespace nettomo {

std::vector<Graph> SieveReport::matched() const {
    std::vector<Graph> out;
    for (const auto& c : candidates) {
        if (c.matched) out.push_back(c.graph);
    }
    return out;
}

bool next_partition(std::vector<int>& d) {
    const int m = static_cast<int>(d.size());
    if (m < 2) return false;
    const int s = std::accumulate(d.begin(), d.end(), 0);
    int i = m - 2;
    while (i >= 0 && d[static_cast<std::size_t>(m - 1)] - d[static_cast<std::size_t>(i)] < 2) --i;
    if (i < 0) return false;
    const int value = d[static_cast<std::size_t>(i)] + 1;
    for (int j = i; j < m - 1; ++j) d[static_cast<std::size_t>(j)] = value;
    d[static_cast<std::size_t>(m - 1)] = s - std::accumulate(d.begin(), d.end() - 1, 0);
    return true;
}

bool satisfies_lower_bounds(const std::vector<int>& parts, const std::vector<int>& bounds) {
    if (bounds.size() > parts.size()) return false;
    std::vector<int> p = parts, b = bounds;
    std::sort(p.rbegin(), p.rend());
    std::sort(b.rbegin(), b.rend());
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (p[k] < b[k]) return false;
    }
    return true;
}

std::vector<std::vector<int>> restricted_partitions(const PartitionProblem& p) {
    std::vector<std::vector<int>> out;
    if (p.m < 0 || p.s < 0 || p.min_part > p.max_part) return out;
    if (p.lower_bounds.size() > static_cast<std::size_t>(p.m)) return out;
    if (p.m == 0) {
        if (p.s == 0) out.emplace_back();
        return out;
    }
    std::vector<int> d(static_cast<std::size_t>(p.m));
    // Non-decreasing fill; each branch stays feasible for the remaining parts.
    std::function<void(int, int, int)> fill = [&](int pos, int floor, int remaining) {
        const int left = p.m - pos;
        if (left == 1) {
            if (remaining >= floor && remaining <= p.max_part) {
                d[static_cast<std::size_t>(pos)] = remaining;
                if (satisfies_lower_bounds(d, p.lower_bounds)) out.push_back(d);
            }
            return;
        }
        for (int x = floor; x <= p.max_part && x * left <= remaining; ++x) {
            if (remaining - x > (left - 1) * p.max_part) continue;
            d[static_cast<std::size_t>(pos)] = x;
            fill(pos + 1, x, remaining - x);
        }
    };
    fill(0, p.min_part, p.s);
    return out;
}

long long partition_count_oracle(int s, int m, int max_part) {
    if (m == 0) return s == 0 ? 1 : 0;
    long long count = 0;
    std::vector<int> d(static_cast<std::size_t>(m), 0);
    std::function<void(int, int)> rec = [&](int pos, int sum) {
        if (sum > s) return;
        if (pos == m) {
            if (sum == s && std::is_sorted(d.begin(), d.end())) ++count;
            return;
        }
        for (int x = 1; x <= max_part; ++x) {
            d[static_cast<std::size_t>(pos)] = x;
            rec(pos + 1, sum + x);
        }
    };
    rec(0, 0);
    return count;
}

bool is_graphical(std::vector<int> d) {
    const int n = static_cast<int>(d.size());
    for (int x : d) {
        if (x < 0 || x > n - 1) return false;
    }
    std::sort(d.rbegin(), d.rend());
    while (!d.empty()) {
        const int largest = d.front();
        d.erase(d.begin());
        if (largest > static_cast<int>(d.size())) return false;
        for (int k = 0; k < largest; ++k) {
            if (--d[static_cast<std::size_t>(k)] < 0) return false;
        }
        std::sort(d.rbegin(), d.rend());
    }
    return true;
}

bool is_graphical(const DegreeSequence& d) { return is_graphical(d.degrees); }

std::vector<ConstructionProblem> assemble_sequences(const SieveInput& in,
                                                    const std::vector<std::vector<int>>& partitions) {
    const int n = in.n;
    std::vector<int> role(static_cast<std::size_t>(n), 0);  // 0 interior, 1 boundary, 2 bounded port
    std::vector<int> base(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < in.boundary_nodes.size(); ++i) {
        role[static_cast<std::size_t>(in.boundary_nodes[i])] = 1;
        base[static_cast<std::size_t>(in.boundary_nodes[i])] = in.boundary_degrees[i];
    }
    std::vector<Vertex> bounded;
    std::vector<int> bound_values;
    for (auto [v, lb] : in.lower_bounds) {
        role[static_cast<std::size_t>(v)] = 2;
        bounded.push_back(v);
        bound_values.push_back(lb);
    }
    std::vector<Vertex> interior;
    for (Vertex v = 0; v < n; ++v) {
        if (role[static_cast<std::size_t>(v)] == 0) interior.push_back(v);
    }

    PairSet forced, forbidden;
    for (const auto& p : in.known_pairs) (p.present ? forced : forbidden).insert({p.u, p.v});
    std::vector<int> forced_at(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : forced) {
        ++forced_at[static_cast<std::size_t>(u)];
        ++forced_at[static_cast<std::size_t>(v)];
    }

    std::vector<ConstructionProblem> out;
    const std::size_t m = bounded.size() + interior.size();
    for (const auto& parts : partitions) {
        if (parts.size() != m) continue;
        if (!satisfies_lower_bounds(parts, bound_values)) continue;
        std::map<int, int> pool;
        for (int x : parts) ++pool[x];

        std::vector<int> degrees = base;
        std::function<void(std::size_t)> assign = [&](std::size_t k) {
            if (k == bounded.size()) {
                std::vector<int> rest;
                for (auto [value, count] : pool) rest.insert(rest.end(), static_cast<std::size_t>(count), value);
                std::sort(rest.rbegin(), rest.rend());
                for (std::size_t i = 0; i < interior.size(); ++i) degrees[static_cast<std::size_t>(interior[i])] = rest[i];
                for (Vertex v = 0; v < n; ++v) {
                    if (forced_at[static_cast<std::size_t>(v)] > degrees[static_cast<std::size_t>(v)]) return;
                }
                if (!is_graphical(degrees)) return;
                out.push_back({DegreeSequence{degrees, true}, forced, forbidden});
                return;
            }
            for (auto& [value, count] : pool) {
                if (count == 0 || value < bound_values[k]) continue;
                --count;
                degrees[static_cast<std::size_t>(bounded[k])] = value;
                assign(k + 1);
                ++count;
            }
        };
        assign(0);
    }
    return out;
}

namespace {

class Constructor {
public:
    Constructor(const ConstructionProblem& cp, long long cap, std::vector<Graph>& out)
        : n_(static_cast<int>(cp.target.degrees.size())), cap_(cap), out_(out), graph_(n_) {
        residual_ = cp.target.degrees;
        allowed_.assign(static_cast<std::size_t>(n_), 0);
        const std::uint64_t all = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
        for (int v = 0; v < n_; ++v) allowed_[static_cast<std::size_t>(v)] = all & ~(std::uint64_t{1} << v);
        for (auto [u, v] : cp.forbidden) disallow(u, v);
        for (auto [u, v] : cp.forced) {
            graph_.add_edge(u, v);
            disallow(u, v);
            --residual_[static_cast<std::size_t>(u)];
            --residual_[static_cast<std::size_t>(v)];
        }
    }

    void run() {
        if (std::any_of(residual_.begin(), residual_.end(), [](int r) { return r < 0; })) return;
        const int total = std::accumulate(residual_.begin(), residual_.end(), 0);
        if (total % 2) return;
        if (!is_graphical(residual_)) return;
        recurse(0);
    }

private:
    void disallow(Vertex u, Vertex v) {
        allowed_[static_cast<std::size_t>(u)] &= ~(std::uint64_t{1} << v);
        allowed_[static_cast<std::size_t>(v)] &= ~(std::uint64_t{1} << u);
    }

    std::vector<int> reduced(std::uint64_t done) const {
        std::vector<int> d;
        for (int v = 0; v < n_; ++v) {
            if (!((done >> v) & 1U)) d.push_back(residual_[static_cast<std::size_t>(v)]);
        }
        return d;
    }

    void emit() {
        if (static_cast<long long>(out_.size()) >= cap_) {
            throw CapacityError("graph construction exceeded " + std::to_string(cap_) + " graphs");
        }
        out_.push_back(graph_);
    }

    // `done` marks vertices whose edges are all decided.
    void recurse(std::uint64_t done) {
        Vertex v = -1;
        for (int w = 0; w < n_; ++w) {
            if ((done >> w) & 1U) continue;
            if (v < 0 || residual_[static_cast<std::size_t>(w)] > residual_[static_cast<std::size_t>(v)]) v = w;
        }
        if (v < 0 || residual_[static_cast<std::size_t>(v)] == 0) {
            emit();
            return;
        }
        const int need = residual_[static_cast<std::size_t>(v)];
        done |= std::uint64_t{1} << v;

        // Remaining vertices by non-increasing residual, ties by label.
        std::vector<Vertex> order;
        for (int w = 0; w < n_; ++w) {
            if (!((done >> w) & 1U)) order.push_back(w);
        }
        std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
            return residual_[static_cast<std::size_t>(a)] > residual_[static_cast<std::size_t>(b)];
        });
        std::vector<int> slots;  // positions in `order` v may still connect to
        for (std::size_t i = 0; i < order.size(); ++i) {
            const Vertex w = order[i];
            if (residual_[static_cast<std::size_t>(w)] > 0 && ((allowed_[static_cast<std::size_t>(v)] >> w) & 1U)) {
                slots.push_back(static_cast<int>(i));
            }
        }
        const int k = static_cast<int>(slots.size());
        if (k < need) return;

        // need-subsets of slots in colexicographic order (numeric order of masks).
        std::vector<std::uint64_t> subsets;
        for (std::uint64_t mask = (std::uint64_t{1} << need) - 1; mask < (std::uint64_t{1} << k);) {
            subsets.push_back(mask);
            const std::uint64_t low = mask & (~mask + 1);
            const std::uint64_t ripple = mask + low;
            if (ripple == 0) break;
            mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }

        // Graphical sets seen so far; any set to their left is graphical as well.
        std::vector<std::vector<int>> graphical;
        auto left_of_known = [&](const std::vector<int>& pos) {
            for (const auto& a : graphical) {
                bool le = true;
                for (std::size_t i = 0; i < pos.size() && le; ++i) le = pos[i] <= a[i];
                if (le) return true;
            }
            return false;
        };

        for (auto it = subsets.rbegin(); it != subsets.rend(); ++it) {
            std::vector<int> pos;
            std::vector<Vertex> nbrs;
            for (int b = 0; b < k; ++b) {
                if ((*it >> b) & 1U) {
                    pos.push_back(slots[static_cast<std::size_t>(b)]);
                    nbrs.push_back(order[static_cast<std::size_t>(slots[static_cast<std::size_t>(b)])]);
                }
            }
            for (Vertex w : nbrs) --residual_[static_cast<std::size_t>(w)];
            residual_[static_cast<std::size_t>(v)] = 0;
            bool ok = left_of_known(pos);
            if (!ok && is_graphical(reduced(done))) {
                ok = true;
                graphical.push_back(pos);
            }
            if (ok) {
                for (Vertex w : nbrs) graph_.add_edge(v, w);
                recurse(done);
                for (Vertex w : nbrs) graph_.remove_edge(v, w);
            }
            for (Vertex w : nbrs) ++residual_[static_cast<std::size_t>(w)];
            residual_[static_cast<std::size_t>(v)] = need;
        }
    }

    int n_;
    long long cap_;
    std::vector<Graph>& out_;
    Graph graph_;
    std::vector<int> residual_;
    std::vector<std::uint64_t> allowed_;
};

}  // namespace

void construct_graphs_into(const ConstructionProblem& cp, long long max_graphs, std::vector<Graph>& out) {
    const int n = static_cast<int>(cp.target.degrees.size());
    if (n < 1 || n > kMaxVertices) throw InvalidArgument("target degree sequence has unsupported length");
    for (const auto& e : cp.forced) {
        if (cp.forbidden.count(e)) throw InvalidArgument("pair is both forced and forbidden");
    }
    Constructor(cp, max_graphs, out).run();
}

std::vector<Graph> construct_graphs(const ConstructionProblem& cp, long long max_graphs) {
    std::vector<Graph> out;
    construct_graphs_into(cp, max_graphs, out);
    return out;
}

Graph canonical_form(const Graph& g, const std::vector<Vertex>& fixed) {
    const int n = g.order();
    std::vector<bool> is_fixed(static_cast<std::size_t>(n), false);
    for (Vertex v : fixed) {
        if (v < 0 || v >= n) throw InvalidArgument("fixed vertex out of range");
        is_fixed[static_cast<std::size_t>(v)] = true;
    }
    std::vector<Vertex> free;
    for (Vertex v = 0; v < n; ++v) {
        if (!is_fixed[static_cast<std::size_t>(v)]) free.push_back(v);
    }
    if (static_cast<int>(free.size()) > kMaxDedupInterior) {
        throw CapacityError("isomorphism dedup supports at most " + std::to_string(kMaxDedupInterior) +
                            " free vertices, got " + std::to_string(free.size()));
    }
    const auto edges = g.edges();
    std::vector<Vertex> image = free;
    std::vector<Vertex> map(static_cast<std::size_t>(n));
    std::iota(map.begin(), map.end(), 0);
    std::vector<Edge> best;
    bool first = true;
    do {
        for (std::size_t i = 0; i < free.size(); ++i) map[static_cast<std::size_t>(free[i])] = image[i];
        std::vector<Edge> relabeled;
        relabeled.reserve(edges.size());
        for (auto [u, v] : edges) relabeled.push_back(std::minmax(map[static_cast<std::size_t>(u)], map[static_cast<std::size_t>(v)]));
        std::sort(relabeled.begin(), relabeled.end());
        if (first || relabeled < best) {
            best = std::move(relabeled);
            first = false;
        }
    } while (std::next_permutation(image.begin(), image.end()));
    return Graph(n, best);
}

std::vector<Graph> dedup_candidates(const std::vector<Graph>& graphs, const std::vector<Vertex>& fixed) {
    std::map<std::vector<Edge>, Graph> classes;
    for (const auto& g : graphs) {
        Graph c = canonical_form(g, fixed);
        auto key = c.edges();
        classes.emplace(std::move(key), std::move(c));
    }
    std::vector<Graph> out;
    out.reserve(classes.size());
    for (auto& [key, g] : classes) out.push_back(std::move(g));
    return out;
}

double spectral_residual(const Graph& g, const Spectrum& target) {
    if (target.size() != g.order()) {
        throw InvalidArgument("target spectrum has " + std::to_string(target.size()) + " values for a graph of order " +
                              std::to_string(g.order()));
    }
    const auto spec = spectrum(g);
    auto want = target.eigenvalues;
    std::sort(want.begin(), want.end());
    double r = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) r = std::max(r, std::abs(spec.eigenvalues[i] - want[i]));
    return r;
}

SieveReport spectral_filter(const std::vector<Graph>& candidates, const Spectrum& target, double tol) {
    SieveReport rep;
    for (const auto& g : candidates) {
        const double r = spectral_residual(g, target);
        rep.candidates.push_back({g, r, r < tol});
        if (r < tol) ++rep.counters.matched;
    }
    return rep;
}

SieveReport run_sieve(const SieveInput& in, const Spectrum& target, const SieveOptions& opts) {
    SieveReport rep;
    const int n = in.n;
    if (target.size() != n) throw InvalidArgument("target spectrum must have n entries");
    if (in.total_degree % 2 != 0) {
        rep.warnings.push_back("total degree " + std::to_string(in.total_degree) + " is odd; no graph can match");
        return rep;
    }

    PartitionProblem prob;
    prob.s = in.s;
    prob.m = n - static_cast<int>(in.boundary_nodes.size());
    prob.max_part = n - 1;
    prob.min_part = 1;
    for (auto [v, lb] : in.lower_bounds) prob.lower_bounds.push_back(lb);
    rep.partitions_found = restricted_partitions(prob);
    rep.counters.partitions_examined = static_cast<long long>(rep.partitions_found.size());

    const auto problems = assemble_sequences(in, rep.partitions_found);
    for (const auto& cp : problems) rep.graphical_sequences.push_back(cp.target);
    rep.counters.sequences_graphical = static_cast<long long>(problems.size());

    std::vector<Graph> built;
    try {
        for (const auto& cp : problems) {
            construct_graphs_into(cp, opts.max_graphs, built);
        }
    } catch (const CapacityError& e) {
        rep.capacity_exceeded = true;
        rep.warnings.push_back(e.what());
    }
    rep.counters.graphs_constructed = static_cast<long long>(built.size());
    rep.counters.search_space_ratio =
        std::ldexp(1.0, n * (n - 1) / 2) / static_cast<double>(std::max<long long>(1, rep.counters.graphs_constructed));

    const auto classes = dedup_candidates(built, in.port_nodes);
    rep.counters.graphs_after_dedup = static_cast<long long>(classes.size());

    auto filtered = spectral_filter(classes, target, opts.spectral_tol);
    rep.candidates = std::move(filtered.candidates);
    rep.counters.matched = filtered.counters.matched;
    if (rep.partitions_found.empty()) rep.warnings.push_back("no partition of s fits the degree bounds");
    return rep;
}

}  // namespace nettomo
