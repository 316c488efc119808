#include "nettomo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "nettomo/errors.hpp"

namespace nettomo {

Eigen::MatrixXd laplacian(const Graph& g) {
    const int n = g.order();
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : g.edges()) {
        l(u, u) += 1.0;
        l(v, v) += 1.0;
        l(u, v) -= 1.0;
        l(v, u) -= 1.0;
    }
    return l;
}

Spectrum spectrum_of_symmetric(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ComputationError("symmetric eigensolver did not converge");
    Spectrum s;
    s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    return s;
}

Spectrum spectrum(const Graph& g) { return spectrum_of_symmetric(laplacian(g)); }

CharPoly poly_from_roots(std::vector<double> roots) {
    // Largest magnitudes first.
    std::sort(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
    std::vector<double> c{1.0};
    for (double r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k >= 1; --k) c[k] -= r * c[k - 1];
    }
    return CharPoly{std::move(c)};
}

CharPoly char_poly(const Spectrum& spec) {
    std::vector<double> roots(spec.eigenvalues.size());
    std::transform(spec.eigenvalues.begin(), spec.eigenvalues.end(), roots.begin(), [](double l) { return -l; });
    return poly_from_roots(std::move(roots));
}

std::vector<double> reduced_poly(const Spectrum& spec) {
    if (spec.eigenvalues.empty()) return {1.0};
    std::vector<double> rest(spec.eigenvalues.begin() + 1, spec.eigenvalues.end());
    return poly_from_roots(std::move(rest)).coefficients;
}

namespace {

bool all_distinct(const std::vector<double>& sorted) {
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] - sorted[i - 1] <= kSpectralTol) return false;
    }
    return true;
}

// Multiplicities of eigenvalue clusters (consecutive gaps <= tol).
std::vector<std::pair<double, int>> clusters(const std::vector<double>& sorted) {
    std::vector<std::pair<double, int>> out;
    for (double l : sorted) {
        if (!out.empty() && l - out.back().first <= kSpectralTol) {
            ++out.back().second;
        } else {
            out.emplace_back(l, 1);
        }
    }
    return out;
}

}  // namespace

SpectralReport spectral_report(const Spectrum& spec, int n) {
    if (spec.size() != n || n < 1) {
        throw InvalidArgument("spectrum has " + std::to_string(spec.size()) + " entries, expected " +
                              std::to_string(n));
    }
    const auto& lam = spec.eigenvalues;
    if (std::abs(lam.front()) > kSpectralTol) {
        throw InvalidArgument("smallest eigenvalue is not zero; not a Laplacian spectrum");
    }

    SpectralReport r;
    r.n = n;
    const double half_sum = 0.5 * std::accumulate(lam.begin(), lam.end(), 0.0);
    r.edge_count = static_cast<int>(std::lround(half_sum));
    r.edge_rounding_residual = std::abs(half_sum - r.edge_count);

    const auto zeros = std::count_if(lam.begin(), lam.end(), [](double l) { return l < kSpectralTol; });
    r.is_connected = zeros == 1;

    double prod = 1.0;
    for (std::size_t i = 1; i < lam.size(); ++i) prod *= lam[i];
    r.spanning_trees = r.is_connected ? prod / n : 0.0;

    const auto poly = char_poly(spec).coefficients;
    const double a_n_minus_1 = poly[static_cast<std::size_t>(n - 1)];
    r.is_tree = r.is_connected && std::abs(a_n_minus_1 - n) < kSpectralTol * n;
    if (r.is_tree) {
        r.wiener_index = n >= 2 ? std::llround(poly[static_cast<std::size_t>(n - 2)]) : 0;
    }

    if (all_distinct(lam)) {
        r.hoffman_number = prod / n;
        std::vector<double> shifted;
        for (std::size_t i = 1; i < lam.size(); ++i) shifted.push_back(n - lam[i]);
        r.complement_poly = poly_from_roots(std::move(shifted)).coefficients;
    }

    const auto groups = clusters(lam);
    if (r.is_tree && n >= 2) {
        const auto simple_positive = std::count_if(groups.begin() + 1, groups.end(),
                                                   [](const auto& c) { return c.second == 1; });
        // Every tree on at most three vertices is a star.
        r.star_by_simple_eigenvalue = simple_positive == 1 || n <= 3;
    }
    if (r.is_connected && groups.size() == 3) {
        r.star_by_three_eigenvalues = std::abs(groups[1].first - 1.0) < kSpectralTol;
    }

    if (r.is_connected) {
        const bool integral = std::all_of(lam.begin(), lam.end(), [](double l) {
            return std::abs(l - std::round(l)) < kSpectralTol;
        });
        if (integral) r.diameter_bound = 2 * std::llround(r.spanning_trees);
    }
    return r;
}

SpectralReport spectral_report(const Graph& g) {
    auto r = spectral_report(spectrum(g), g.order());
    if (r.is_connected != is_connected(g)) {
        throw ConsistencyError("spectral connectivity disagrees with breadth-first search");
    }
    return r;
}

long long count_k_matchings(const Graph& g, int k) {
    if (k < 0) return 0;
    const auto es = g.edges();
    std::function<long long(std::size_t, int, std::uint64_t)> rec =
        [&](std::size_t from, int left, std::uint64_t used) -> long long {
        if (left == 0) return 1;
        long long total = 0;
        for (std::size_t i = from; i < es.size(); ++i) {
            const auto mask = (std::uint64_t{1} << es[i].first) | (std::uint64_t{1} << es[i].second);
            if (used & mask) continue;
            total += rec(i + 1, left - 1, used | mask);
        }
        return total;
    };
    return rec(0, k, 0);
}

namespace {

// Multigraph with edge multiplicities, vertices compacted on contraction.
class TreeCounter {
public:
    using Mult = std::vector<std::vector<std::uint16_t>>;

    std::uint64_t count(const Mult& m) {
        const std::size_t n = m.size();
        if (n <= 1) return 1;
        auto key = flatten(m);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        std::uint64_t result = 0;
        if (!connected(m)) {
            result = 0;
        } else {
            // Lowest-degree vertex; its first neighbour supplies the edge.
            std::size_t u = 0;
            unsigned best = ~0U;
            for (std::size_t i = 0; i < n; ++i) {
                unsigned d = 0;
                for (std::size_t j = 0; j < n; ++j) d += m[i][j];
                if (d < best) {
                    best = d;
                    u = i;
                }
            }
            std::size_t v = 0;
            while (m[u][v] == 0) ++v;
            const std::uint64_t mult = m[u][v];
            if (mult == best) {
                // u hangs off v alone: every spanning tree uses exactly one u-v edge.
                result = mult * count(remove_vertex(m, u));
            } else {
                Mult deleted = m;
                deleted[u][v] = deleted[v][u] = 0;
                result = count(deleted) + mult * count(contract(m, u, v));
            }
        }
        memo_.emplace(std::move(key), result);
        return result;
    }

private:
    static std::vector<std::uint16_t> flatten(const Mult& m) {
        std::vector<std::uint16_t> k;
        k.push_back(static_cast<std::uint16_t>(m.size()));
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = i + 1; j < m.size(); ++j) k.push_back(m[i][j]);
        }
        return k;
    }

    static bool connected(const Mult& m) {
        std::vector<bool> seen(m.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[u][v] && !seen[v]) {
                    seen[v] = true;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == m.size();
    }

    static Mult remove_vertex(const Mult& m, std::size_t drop) {
        Mult out;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == drop) continue;
            std::vector<std::uint16_t> row;
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (j != drop) row.push_back(m[i][j]);
            }
            out.push_back(std::move(row));
        }
        return out;
    }

    // Merge u into v; the u-v edges become loops and are discarded.
    static Mult contract(const Mult& m, std::size_t u, std::size_t v) {
        Mult merged = m;
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j == u || j == v) continue;
            merged[v][j] = static_cast<std::uint16_t>(merged[v][j] + m[u][j]);
            merged[j][v] = merged[v][j];
        }
        merged[u][v] = merged[v][u] = 0;
        return remove_vertex(merged, u);
    }

    std::map<std::vector<std::uint16_t>, std::uint64_t> memo_;
};

}  // namespace

std::uint64_t spanning_tree_count_oracle(const Graph& g) {
    const int n = g.order();
    if (n > 12) throw InvalidArgument("deletion-contraction oracle is limited to n <= 12");
    TreeCounter::Mult m(static_cast<std::size_t>(n), std::vector<std::uint16_t>(static_cast<std::size_t>(n), 0));
    for (auto [u, v] : g.edges()) {
        m[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
        m[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    }
    return TreeCounter{}.count(m);
}

long long wiener_index(const Graph& g) {
    const auto d = distance_matrix(g);
    long long total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            if (d[i][j] < 0) return -1;
            total += d[i][j];
        }
    }
    return total;
}

}  // namespace nettomo
