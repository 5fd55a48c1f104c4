#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "errors.hpp"
#include "prng.hpp"

namespace specsparse {

/// d-regular circulant graph on n vertices: vertex i is adjacent to
/// i +- s (mod n) for every shift s. Shifts are distinct values in
/// [1, floor(n/2)]; the antipodal shift n/2 (n even) contributes a single
/// edge per vertex, every other shift two.
struct CirculantExpander {
    int n = 0;
    std::vector<int> shifts; // sorted ascending

    int degree() const {
        int d = 2 * static_cast<int>(shifts.size());
        if (n % 2 == 0 && !shifts.empty() && shifts.back() == n / 2) d -= 1;
        return d;
    }

    bool complete() const { return degree() == n - 1; }

    /// Unordered edge list {i, j}, i < j, sorted. |edges| = n * d / 2.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> e;
        e.reserve(static_cast<std::size_t>(n) * shifts.size());
        for (int i = 0; i < n; ++i)
            for (int s : shifts) {
                int j = i + s;
                if (j < n)
                    e.emplace_back(i, j);
                else
                    e.emplace_back(j - n, i); // wrapped; j-n < i always
            }
        std::sort(e.begin(), e.end());
        // the antipodal shift emits each of its edges twice
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    }

    DenseMatrix adjacency() const {
        DenseMatrix g(n, n);
        for (auto [i, j] : edges()) {
            g(i, j) = 1.0;
            g(j, i) = 1.0;
        }
        return g;
    }
};

/// Exact adjacency spectrum and the certified expansion quality
/// eps_hat = max_{k != 0} |lambda_k| / d. Circulants and the all-ones matrix
/// share the Fourier eigenbasis, so ||1 - (n/d) G||_2 = eps_hat * n exactly.
struct ExpanderCertificate {
    int n = 0;
    int d = 0;
    double eps_hat = 0.0;
    std::vector<double> lambda; // lambda_k, k = 0..n-1; lambda_0 = d
};

/// lambda_k = sum over shifts s < n/2 of 2 cos(2 pi k s / n), plus cos(pi k)
/// when the antipodal shift is present. Fixed summation order per k.
inline std::vector<double> circulant_spectrum(const CirculantExpander& g) {
    const int n = g.n;
    const double two_pi = 2.0 * M_PI;
    std::vector<double> lambda(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t k0, std::size_t k1) {
        for (std::size_t k = k0; k < k1; ++k) {
            double s = 0.0;
            for (int sh : g.shifts) {
                double ang = two_pi * static_cast<double>(k) * sh / n;
                if (2 * sh == n)
                    s += std::cos(ang); // antipodal: one edge per vertex
                else
                    s += 2.0 * std::cos(ang);
            }
            lambda[k] = s;
        }
    });
    lambda[0] = static_cast<double>(g.degree()); // exact, no cosine rounding
    return lambda;
}

inline ExpanderCertificate certify(const CirculantExpander& g) {
    ExpanderCertificate c;
    c.n = g.n;
    c.d = g.degree();
    c.lambda = circulant_spectrum(g);
    double m = 0.0;
    for (std::size_t k = 1; k < c.lambda.size(); ++k) m = std::max(m, std::fabs(c.lambda[k]));
    c.eps_hat = m / static_cast<double>(c.d);
    return c;
}

namespace expander_detail {

/// Deterministic shift order for (n, seed): a seeded permutation of
/// [1, floor(n/2)]. Prefixes of this order are the candidate shift sets.
inline std::vector<int> shift_order(int n, std::uint64_t seed) {
    std::vector<int> order(static_cast<std::size_t>(n / 2));
    std::iota(order.begin(), order.end(), 1);
    shuffle(order, seed);
    return order;
}

inline CirculantExpander prefix_graph(int n, const std::vector<int>& order, int m) {
    CirculantExpander g;
    g.n = n;
    g.shifts.assign(order.begin(), order.begin() + m);
    std::sort(g.shifts.begin(), g.shifts.end());
    return g;
}

} // namespace expander_detail

/// Builds a circulant whose certificate meets eps_target when attainable.
/// The shift count grows along a fixed power-of-two grid (shared across all
/// eps_target values, so a smaller target never yields a smaller degree),
/// starting near degree min(n-1, ceil(4/eps_target^2)) and ending, at worst,
/// at the complete graph whose certificate is eps_hat = 1/(n-1). Targets
/// below 1/(n-1) are unattainable and return the complete graph with its
/// honest certificate.
inline std::pair<CirculantExpander, ExpanderCertificate>
build_for_epsilon(int n, double eps_target, std::uint64_t seed) {
    if (n < 4) throw BadSizes("build_for_epsilon: n must be at least 4");
    if (!(eps_target > 0.0 && eps_target < 1.0))
        throw BadSizes("build_for_epsilon: eps_target must lie in (0,1)");

    const int max_shifts = n / 2;
    std::vector<int> order = expander_detail::shift_order(n, seed);

    double d0 = std::min<double>(n - 1, std::ceil(4.0 / (eps_target * eps_target)));
    int m_start = static_cast<int>(std::ceil(d0 / 2.0));
    int m = 1;
    while (m < m_start && m < max_shifts) m *= 2;
    m = std::min(m, max_shifts);

    for (;;) {
        CirculantExpander g = expander_detail::prefix_graph(n, order, m);
        ExpanderCertificate c = certify(g);
        if (c.eps_hat <= eps_target || m == max_shifts) return {std::move(g), std::move(c)};
        m = std::min(m * 2, max_shifts);
    }
}

enum class ExpanderMode { Certified, Seeded };

/// Graph intended to join any two disjoint vertex sets of size >= eps * n.
/// Certified mode returns a graph with eps_hat <= eps, which suffices by the
/// expander mixing lemma; seeded mode returns ceil(3 ln(n) / eps) deterministic
/// shifts with no certificate (random regular graphs of that degree expand
/// with high probability, and end-to-end tests validate the choice).
inline std::pair<CirculantExpander, std::optional<ExpanderCertificate>>
build_epsn_expander(int n, double eps, ExpanderMode mode, std::uint64_t seed) {
    if (n < 4) throw BadSizes("build_epsn_expander: n must be at least 4");
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSizes("build_epsn_expander: eps must lie in (0,1)");
    if (mode == ExpanderMode::Certified) {
        auto [g, c] = build_for_epsilon(n, eps, seed);
        return {std::move(g), std::move(c)};
    }
    int m = static_cast<int>(std::ceil(3.0 * std::log(static_cast<double>(n)) / eps));
    m = std::min(std::max(m, 1), n / 2);
    return {expander_detail::prefix_graph(n, expander_detail::shift_order(n, seed), m),
            std::nullopt};
}

} // namespace specsparse
