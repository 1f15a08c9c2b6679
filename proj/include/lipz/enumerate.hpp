#pragma once

/**
 * @file enumerate.hpp
 * @brief Exhaustive enumeration of bi-Lipschitz bijections of [0, n).
 *
 * Backtracking search in lexicographic order of the value sequence with
 * three prunes: value availability, forward adjacent gap, and backward
 * adjacent gap on the partially built inverse. A factorial-time filter
 * (naive_count) serves as the independent reference, and
 * verify_theorem_over checks the rigidity bound on every visited map.
 */

#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lipz/rational.hpp"
#include "lipz/zmap.hpp"

namespace lipz {

class too_large : public std::runtime_error {
public:
    explicit too_large(const std::string& what) : std::runtime_error(what) {}
};

/// Positive rational cap on a Lipschitz constant.
struct Cap {
    std::int64_t num = 1;
    std::int64_t den = 1;

    static Cap of(std::int64_t num, std::int64_t den = 1) {
        if (num <= 0 || den <= 0) throw std::invalid_argument("cap must be positive");
        std::int64_t g = std::gcd(num, den);
        return Cap{num / g, den / g};
    }

    bool admits_gap(std::int64_t gap) const {
        return static_cast<__int128>(gap) * den <= static_cast<__int128>(num);
    }

    Rat to_rational() const { return Rat(num, den); }
    bool operator==(const Cap&) const = default;
};

struct EnumSpec {
    int n = 1;
    Cap k_forward;
    Cap k_backward;

    static EnumSpec checked(int n, Cap k_forward, Cap k_backward) {
        if (n < 1) throw std::invalid_argument("enumeration: n must be positive");
        if (k_forward.num < k_forward.den || k_backward.num < k_backward.den)
            throw std::invalid_argument("enumeration: caps must be at least 1");
        return EnumSpec{n, k_forward, k_backward};
    }
};

struct EnumStats {
    std::uint64_t nodes = 0;
    std::uint64_t pruned_used = 0;
    std::uint64_t pruned_forward = 0;
    std::uint64_t pruned_backward = 0;

    EnumStats& operator+=(const EnumStats& o) {
        nodes += o.nodes;
        pruned_used += o.pruned_used;
        pruned_forward += o.pruned_forward;
        pruned_backward += o.pruned_backward;
        return *this;
    }
};

struct EnumResult {
    std::uint64_t count = 0;
    std::vector<FiniteBijection> violations;
    EnumStats stats;
};

/// Adjacent-gap Lipschitz constants (forward, backward) of a finite
/// bijection; (1, 1) for the one-point map.
inline std::pair<int, int> finite_lipschitz_constants(const FiniteBijection& f) {
    const int n = f.size;
    if (n == 1) return {1, 1};
    std::vector<int> inverse(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) inverse[static_cast<std::size_t>(f.values[static_cast<std::size_t>(i)])] = i;
    int fwd = 1, bwd = 1;
    for (int i = 0; i + 1 < n; ++i) {
        fwd = std::max(fwd, std::abs(f.values[static_cast<std::size_t>(i + 1)] - f.values[static_cast<std::size_t>(i)]));
        bwd = std::max(bwd, std::abs(inverse[static_cast<std::size_t>(i + 1)] - inverse[static_cast<std::size_t>(i)]));
    }
    return {fwd, bwd};
}

struct TheoremCheck {
    bool conforms = true;
    int orientation = 1;
    int constant = 0;
    int residual_sup = 0;
    long long lipschitz_product = 1;
};

/// Best-orientation midrange decomposition of a finite bijection, checked
/// against the product of its actual adjacent-gap constants.
inline TheoremCheck theorem_check(const FiniteBijection& f) {
    auto [fwd, bwd] = finite_lipschitz_constants(f);
    TheoremCheck out;
    out.lipschitz_product = static_cast<long long>(fwd) * bwd;

    bool first_orientation = true;
    for (int s : {+1, -1}) {
        int dmin = 0, dmax = 0;
        for (int x = 0; x < f.size; ++x) {
            int d = f.values[static_cast<std::size_t>(x)] - s * x;
            if (x == 0) { dmin = dmax = d; }
            else { dmin = std::min(dmin, d); dmax = std::max(dmax, d); }
        }
        int mid = (dmin + dmax) / 2;  // truncation = half toward zero
        int sup = std::max(dmax - mid, mid - dmin);
        if (first_orientation || sup < out.residual_sup) {
            out.orientation = s;
            out.constant = mid;
            out.residual_sup = sup;
            first_orientation = false;
        }
    }
    out.conforms = out.residual_sup <= out.lipschitz_product;
    return out;
}

namespace detail {

struct SearchState {
    std::vector<int> values;
    std::vector<char> used;
    std::vector<int> inverse;  // value -> position, -1 when unassigned

    explicit SearchState(int n)
        : values(static_cast<std::size_t>(n), -1),
          used(static_cast<std::size_t>(n), 0),
          inverse(static_cast<std::size_t>(n), -1) {}
};

/// Returns false (and counts the prune) when value v cannot go at
/// position depth.
inline bool admissible(const EnumSpec& spec, const SearchState& st, int depth, int v,
                       EnumStats& stats) {
    if (st.used[static_cast<std::size_t>(v)]) {
        ++stats.pruned_used;
        return false;
    }
    if (depth > 0 &&
        !spec.k_forward.admits_gap(std::abs(v - st.values[static_cast<std::size_t>(depth - 1)]))) {
        ++stats.pruned_forward;
        return false;
    }
    for (int nb : {v - 1, v + 1}) {
        if (nb < 0 || nb >= spec.n) continue;
        int pos = st.inverse[static_cast<std::size_t>(nb)];
        if (pos >= 0 && !spec.k_backward.admits_gap(std::abs(depth - pos))) {
            ++stats.pruned_backward;
            return false;
        }
    }
    return true;
}

template <typename Leaf>
void search(const EnumSpec& spec, SearchState& st, int depth, EnumStats& stats, Leaf&& leaf) {
    if (depth == spec.n) {
        leaf(st.values);
        return;
    }
    for (int v = 0; v < spec.n; ++v) {
        if (!admissible(spec, st, depth, v, stats)) continue;
        st.values[static_cast<std::size_t>(depth)] = v;
        st.used[static_cast<std::size_t>(v)] = 1;
        st.inverse[static_cast<std::size_t>(v)] = depth;
        ++stats.nodes;
        search(spec, st, depth + 1, stats, leaf);
        st.used[static_cast<std::size_t>(v)] = 0;
        st.inverse[static_cast<std::size_t>(v)] = -1;
    }
    st.values[static_cast<std::size_t>(depth)] = -1;
}

/// Lexicographically ordered branch prefixes of length min(n, 2); the
/// search is embarrassingly parallel over them. Prunes hit while sifting
/// prefixes land in stats, so merged totals match a single full search.
inline std::vector<std::pair<int, int>> branch_prefixes(const EnumSpec& spec, EnumStats& stats) {
    std::vector<std::pair<int, int>> out;
    if (spec.n == 1) {
        out.emplace_back(0, -1);
        return out;
    }
    SearchState st(spec.n);
    for (int v0 = 0; v0 < spec.n; ++v0) {
        if (!admissible(spec, st, 0, v0, stats)) continue;
        st.values[0] = v0;
        st.used[static_cast<std::size_t>(v0)] = 1;
        st.inverse[static_cast<std::size_t>(v0)] = 0;
        for (int v1 = 0; v1 < spec.n; ++v1)
            if (admissible(spec, st, 1, v1, stats)) out.emplace_back(v0, v1);
        st.used[static_cast<std::size_t>(v0)] = 0;
        st.inverse[static_cast<std::size_t>(v0)] = -1;
    }
    return out;
}

/// Runs one branch sequentially. BranchLeaf is called with each completed
/// value vector, in lexicographic order within the branch.
template <typename Leaf>
EnumStats run_branch(const EnumSpec& spec, std::pair<int, int> prefix, Leaf&& leaf) {
    EnumStats stats;
    SearchState st(spec.n);
    int depth = 0;
    for (int v : {prefix.first, prefix.second}) {
        if (v < 0) break;
        st.values[static_cast<std::size_t>(depth)] = v;
        st.used[static_cast<std::size_t>(v)] = 1;
        st.inverse[static_cast<std::size_t>(v)] = depth;
        ++stats.nodes;
        ++depth;
    }
    search(spec, st, depth, stats, leaf);
    return stats;
}

}  // namespace detail

struct EnumOptions {
    unsigned threads = 1;  // 0 = hardware concurrency
};

/// Visits every bijection of [0, n) whose forward and backward adjacent-gap
/// maxima respect the caps, exactly once, in lexicographic order of the
/// value sequence. The visitor may be empty. Counts and visitation order do
/// not depend on the thread count: with several workers each branch buffers
/// its visits and they are delivered branch by branch in lexicographic
/// order after the search completes.
inline EnumResult enumerate_bijections(const EnumSpec& spec,
                                       const std::function<void(const FiniteBijection&)>& visitor = {},
                                       EnumOptions options = {}) {
    unsigned threads = options.threads == 0
                           ? std::max(1u, std::thread::hardware_concurrency())
                           : options.threads;
    EnumResult result;
    auto prefixes = detail::branch_prefixes(spec, result.stats);
    threads = std::min<unsigned>(threads, static_cast<unsigned>(prefixes.size()));

    if (prefixes.empty()) return result;

    if (threads <= 1) {
        for (auto prefix : prefixes) {
            std::uint64_t count = 0;
            auto stats = detail::run_branch(spec, prefix, [&](const std::vector<int>& values) {
                ++count;
                if (visitor) visitor(FiniteBijection{spec.n, values});
            });
            result.count += count;
            result.stats += stats;
        }
        return result;
    }

    struct BranchOutcome {
        std::uint64_t count = 0;
        EnumStats stats;
        std::vector<std::vector<int>> visited;
    };
    std::vector<BranchOutcome> outcomes(prefixes.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= prefixes.size()) return;
            auto& slot = outcomes[i];
            slot.stats = detail::run_branch(spec, prefixes[i], [&](const std::vector<int>& values) {
                ++slot.count;
                if (visitor) slot.visited.push_back(values);
            });
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (auto& slot : outcomes) {
        result.count += slot.count;
        result.stats += slot.stats;
        if (visitor)
            for (auto& values : slot.visited) visitor(FiniteBijection{spec.n, std::move(values)});
    }
    return result;
}

/// Factorial-time reference: filters all n! permutations with the all-pairs
/// Lipschitz definition on both the map and its inverse (deliberately not
/// the adjacent-gap shortcut).
inline std::uint64_t naive_count(const EnumSpec& spec) {
    if (spec.n > 8) throw too_large("naive filter limited to n <= 8, got n = " + std::to_string(spec.n));

    std::vector<int> values(static_cast<std::size_t>(spec.n));
    std::iota(values.begin(), values.end(), 0);

    auto all_pairs_ok = [&](const std::vector<int>& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                std::int64_t dx = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i);
                std::int64_t dy = std::abs(v[j] - v[i]);
                // |f(j)-f(i)| / |j-i| <= k_forward and |j-i| / |f(j)-f(i)| <= k_backward
                if (dy * spec.k_forward.den > dx * spec.k_forward.num) return false;
                if (dx * spec.k_backward.den > dy * spec.k_backward.num) return false;
            }
        return true;
    };

    std::uint64_t count = 0;
    do {
        if (all_pairs_ok(values)) ++count;
    } while (std::next_permutation(values.begin(), values.end()));
    return count;
}

/// Enumerates and checks the rigidity bound on each visited bijection with
/// its actual constants; violations are collected in visitation order.
inline EnumResult verify_theorem_over(const EnumSpec& spec, EnumOptions options = {}) {
    unsigned threads = options.threads == 0
                           ? std::max(1u, std::thread::hardware_concurrency())
                           : options.threads;
    EnumResult result;
    auto prefixes = detail::branch_prefixes(spec, result.stats);
    threads = std::min<unsigned>(threads, static_cast<unsigned>(prefixes.size()));

    if (prefixes.empty()) return result;

    struct BranchOutcome {
        std::uint64_t count = 0;
        EnumStats stats;
        std::vector<FiniteBijection> violations;
    };
    std::vector<BranchOutcome> outcomes(prefixes.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= prefixes.size()) return;
            auto& slot = outcomes[i];
            slot.stats = detail::run_branch(spec, prefixes[i], [&](const std::vector<int>& values) {
                ++slot.count;
                FiniteBijection f{spec.n, values};
                if (!theorem_check(f).conforms) slot.violations.push_back(std::move(f));
            });
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (auto& slot : outcomes) {
        result.count += slot.count;
        result.stats += slot.stats;
        for (auto& v : slot.violations) result.violations.push_back(std::move(v));
    }
    return result;
}

}  // namespace lipz
