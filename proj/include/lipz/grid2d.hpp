#pragma once

/**
 * @file grid2d.hpp
 * @brief Bi-Lipschitz self-maps of the integer grid.
 *
 * Shears (x, y) -> (x, y + g(x)), unimodular linear maps, translations and
 * their compositions, with exact window diagnostics: empirical Lipschitz
 * constants, L1 distance to the nearest lattice isometry, and Folner ratios
 * over square boxes. The grid carries the L1 (graph) metric; the matrix
 * convention is row-vector: [[a,b],[c,d]] sends (x,y) to (ax+by, cx+dy).
 */

#include <algorithm>
#include <array>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "lipz/rational.hpp"

namespace lipz {

struct GridPoint {
    Int x;
    Int y;
    bool operator==(const GridPoint&) const = default;
};

inline Int l1_distance(const GridPoint& p, const GridPoint& q) {
    return abs_int(p.x - q.x) + abs_int(p.y - q.y);
}

/// Integer Lipschitz function g(x) = slope*x + offset + table(x); the shear
/// ingredient. Closed under addition and negation, so shear inverses and
/// the shear group law stay exactly representable.
class LatticeFunction {
public:
    LatticeFunction() = default;

    static LatticeFunction checked(Int slope, Int offset, std::vector<std::pair<Int, Int>> table) {
        std::sort(table.begin(), table.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<Int, Int>> canonical;
        for (auto& e : table) {
            if (!canonical.empty() && canonical.back().first == e.first)
                throw std::invalid_argument("g.table: duplicate key " + e.first.str());
            if (e.second != 0) canonical.push_back(std::move(e));
        }
        LatticeFunction g;
        g.slope_ = std::move(slope);
        g.offset_ = std::move(offset);
        g.table_ = std::move(canonical);
        return g;
    }

    static LatticeFunction linear(Int slope, Int offset = 0) {
        return checked(std::move(slope), std::move(offset), {});
    }

    Int operator()(const Int& x) const {
        Int v = slope_ * x + offset_;
        auto it = std::lower_bound(table_.begin(), table_.end(), x,
                                   [](const auto& e, const Int& key) { return e.first < key; });
        if (it != table_.end() && it->first == x) v += it->second;
        return v;
    }

    LatticeFunction operator+(const LatticeFunction& o) const {
        std::vector<std::pair<Int, Int>> merged(table_);
        merged.insert(merged.end(), o.table_.begin(), o.table_.end());
        std::sort(merged.begin(), merged.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<Int, Int>> summed;
        for (auto& e : merged) {
            if (!summed.empty() && summed.back().first == e.first)
                summed.back().second += e.second;
            else
                summed.push_back(e);
        }
        std::erase_if(summed, [](const auto& e) { return e.second == 0; });
        LatticeFunction g;
        g.slope_ = slope_ + o.slope_;
        g.offset_ = offset_ + o.offset_;
        g.table_ = std::move(summed);
        return g;
    }

    LatticeFunction operator-() const {
        LatticeFunction g;
        g.slope_ = -slope_;
        g.offset_ = -offset_;
        g.table_ = table_;
        for (auto& e : g.table_) e.second = -e.second;
        return g;
    }

    const Int& slope() const { return slope_; }
    const Int& offset() const { return offset_; }
    const std::vector<std::pair<Int, Int>>& table() const { return table_; }
    bool operator==(const LatticeFunction&) const = default;

private:
    Int slope_ = 0;
    Int offset_ = 0;
    std::vector<std::pair<Int, Int>> table_;
};

struct Mat2 {
    Int a, b, c, d;  // row convention: (x,y) -> (ax+by, cx+dy)
    Int det() const { return a * d - b * c; }
    bool operator==(const Mat2&) const = default;
};

class GridMap {
public:
    enum class Kind { shear, linear, translation, composition };

    static GridMap shear(LatticeFunction g) {
        GridMap m(Kind::shear);
        m.g_ = std::move(g);
        return m;
    }

    static GridMap linear(Mat2 matrix) {
        Int det = matrix.det();
        if (det != 1 && det != -1)
            throw std::invalid_argument("m: matrix must be unimodular, det = " + det.str());
        GridMap m(Kind::linear);
        m.m_ = std::move(matrix);
        return m;
    }

    static GridMap translation(Int tx, Int ty) {
        GridMap m(Kind::translation);
        m.t_ = GridPoint{std::move(tx), std::move(ty)};
        return m;
    }

    /// maps[0] is outermost: the composite applies maps back to front.
    static GridMap composition(std::vector<GridMap> maps) {
        GridMap m(Kind::composition);
        m.children_ = std::move(maps);
        return m;
    }

    Kind kind() const { return kind_; }
    const LatticeFunction& shear_function() const { return g_; }
    const Mat2& matrix() const { return m_; }
    const GridPoint& offset() const { return t_; }
    const std::vector<GridMap>& children() const { return children_; }

    GridPoint operator()(const GridPoint& p) const {
        switch (kind_) {
            case Kind::shear:
                return GridPoint{p.x, p.y + g_(p.x)};
            case Kind::linear:
                return GridPoint{m_.a * p.x + m_.b * p.y, m_.c * p.x + m_.d * p.y};
            case Kind::translation:
                return GridPoint{p.x + t_.x, p.y + t_.y};
            case Kind::composition: {
                GridPoint q = p;
                for (auto it = children_.rbegin(); it != children_.rend(); ++it) q = (*it)(q);
                return q;
            }
        }
        return p;  // unreachable
    }

    GridMap inverse() const {
        switch (kind_) {
            case Kind::shear:
                return shear(-g_);
            case Kind::linear: {
                Int det = m_.det();
                // adjugate over det; det is +-1 so entries stay integral
                Mat2 inv{m_.d * det, -m_.b * det, -m_.c * det, m_.a * det};
                return linear(inv);
            }
            case Kind::translation:
                return translation(-t_.x, -t_.y);
            case Kind::composition: {
                std::vector<GridMap> reversed;
                reversed.reserve(children_.size());
                for (auto it = children_.rbegin(); it != children_.rend(); ++it)
                    reversed.push_back(it->inverse());
                return composition(std::move(reversed));
            }
        }
        return *this;  // unreachable
    }

private:
    explicit GridMap(Kind kind) : kind_(kind) {}
    Kind kind_;
    LatticeFunction g_;
    Mat2 m_{1, 0, 0, 1};
    GridPoint t_{0, 0};
    std::vector<GridMap> children_;
};

inline GridPoint apply(const GridMap& f, const GridPoint& p) { return f(p); }

struct GridWindowReport {
    long long n = 1;
    Rat value = 0;
};

struct GridLipschitzReport {
    long long n = 1;
    Rat forward = 1;
    Rat backward = 1;
};

struct GridFolnerReport {
    long long n = 1;
    Int intersection = 0;
    Rat ratio = 0;
};

namespace detail {

inline void require_window(long long n) {
    if (n < 1) throw std::invalid_argument("grid window: n must be positive");
}

/// Runs scan over contiguous row stripes of [-n, n] and returns the partial
/// results in stripe order, so any associative merge is independent of both
/// the stripe width and the worker count.
template <typename Partial, typename ScanFn>
std::vector<Partial> scan_row_stripes(long long n, unsigned threads, ScanFn scan) {
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    const long long rows = 2 * n + 1;
    const long long stripe = std::max<long long>(1, rows / (4 * static_cast<long long>(workers)));

    std::vector<std::pair<long long, long long>> ranges;
    for (long long lo = -n; lo <= n; lo += stripe)
        ranges.emplace_back(lo, std::min(n, lo + stripe - 1));

    std::vector<Partial> partials(ranges.size());
    if (workers <= 1 || ranges.size() <= 1) {
        for (std::size_t i = 0; i < ranges.size(); ++i)
            partials[i] = scan(ranges[i].first, ranges[i].second);
        return partials;
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= ranges.size()) return;
            partials[i] = scan(ranges[i].first, ranges[i].second);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(workers, ranges.size()); ++t)
        pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return partials;
}

/// Max L1 image distance over L1-adjacent pairs in [-n, n]^2; each pair is
/// owned by the row of its left/lower point.
inline Int max_adjacent_image_distance(const GridMap& f, long long n, unsigned threads) {
    auto partials = scan_row_stripes<Int>(n, threads, [&](long long xlo, long long xhi) {
        Int best = 0;
        for (long long x = xlo; x <= xhi; ++x)
            for (long long y = -n; y <= n; ++y) {
                GridPoint fp = f(GridPoint{Int(x), Int(y)});
                if (x + 1 <= n)
                    best = std::max(best, l1_distance(fp, f(GridPoint{Int(x + 1), Int(y)})));
                if (y + 1 <= n)
                    best = std::max(best, l1_distance(fp, f(GridPoint{Int(x), Int(y + 1)})));
            }
        return best;
    });
    Int best = 0;
    for (const auto& p : partials) best = std::max(best, p);
    return best;
}

}  // namespace detail

/// Window-empirical Lipschitz constants of f and its constructed inverse.
inline GridLipschitzReport grid_lipschitz_window(const GridMap& f, long long n,
                                                 unsigned threads = 1) {
    detail::require_window(n);
    GridLipschitzReport out;
    out.n = n;
    out.forward = Rat(detail::max_adjacent_image_distance(f, n, threads));
    out.backward = Rat(detail::max_adjacent_image_distance(f.inverse(), n, threads));
    return out;
}

/// L1 distance from f to the nearest isometry of the grid on the window
/// [-n, n]^2: minimum over the 8 point-group elements and all translations
/// with |t|_inf <= 4n of the max pointwise deviation. Uses the identity
/// |a| + |b| = max(|a+b|, |a-b|) to make the translation sweep O(1) per
/// candidate after one window scan.
inline GridWindowReport isometry_gap(const GridMap& f, long long n, unsigned threads = 1) {
    detail::require_window(n);
    static constexpr std::array<std::array<int, 4>, 8> point_group = {{
        {1, 0, 0, 1},   {-1, 0, 0, 1},  {1, 0, 0, -1},  {-1, 0, 0, -1},
        {0, 1, 1, 0},   {0, -1, 1, 0},  {0, 1, -1, 0},  {0, -1, -1, 0},
    }};

    const Int bound = Int(4) * n;
    Int best;
    bool have_best = false;

    struct Ranges {
        Int umin, umax, wmin, wmax;
        bool any = false;
    };

    for (const auto& pg : point_group) {
        // Deviation ranges in rotated coordinates u = dx+dy, w = dx-dy.
        auto partials = detail::scan_row_stripes<Ranges>(n, threads, [&](long long xlo, long long xhi) {
            Ranges r;
            for (long long x = xlo; x <= xhi; ++x)
                for (long long y = -n; y <= n; ++y) {
                    GridPoint fp = f(GridPoint{Int(x), Int(y)});
                    Int dx = fp.x - (Int(pg[0]) * x + Int(pg[1]) * y);
                    Int dy = fp.y - (Int(pg[2]) * x + Int(pg[3]) * y);
                    Int u = dx + dy, w = dx - dy;
                    if (!r.any) { r.umin = r.umax = u; r.wmin = r.wmax = w; r.any = true; }
                    else {
                        r.umin = std::min(r.umin, u); r.umax = std::max(r.umax, u);
                        r.wmin = std::min(r.wmin, w); r.wmax = std::max(r.wmax, w);
                    }
                }
            return r;
        });
        Int umin, umax, wmin, wmax;
        bool first = true;
        for (const auto& r : partials) {
            if (!r.any) continue;
            if (first) { umin = r.umin; umax = r.umax; wmin = r.wmin; wmax = r.wmax; first = false; }
            else {
                umin = std::min(umin, r.umin); umax = std::max(umax, r.umax);
                wmin = std::min(wmin, r.wmin); wmax = std::max(wmax, r.wmax);
            }
        }

        // t = (tx, ty) in the box becomes s = tx+ty, d = tx-ty with
        // |s+d| <= 8n, |s-d| <= 8n and s = d (mod 2); the objective is
        // max(g(s), h(d)) with independent V-shaped g and h.
        auto g_of = [&](const Int& s) { return std::max(Int(umax - s), Int(s - umin)); };
        auto h_of = [&](const Int& d) { return std::max(Int(wmax - d), Int(d - wmin)); };

        for (Int s = -2 * bound; s <= 2 * bound; ++s) {
            Int dlo = std::max(Int(-2 * bound - s), Int(s - 2 * bound));
            Int dhi = std::min(Int(2 * bound - s), Int(s + 2 * bound));
            Int mid = (wmin + wmax) / 2;
            Int local;
            bool have_local = false;
            for (Int cand : {Int(mid - 2), Int(mid - 1), mid, Int(mid + 1), Int(mid + 2),
                             dlo, Int(dlo + 1), Int(dhi - 1), dhi}) {
                if (cand < dlo || cand > dhi) continue;
                if ((cand - s) % 2 != 0) continue;  // parity: tx, ty integral
                Int v = std::max(g_of(s), h_of(cand));
                if (!have_local || v < local) { local = v; have_local = true; }
            }
            if (have_local && (!have_best || local < best)) { best = local; have_best = true; }
        }
    }

    GridWindowReport out;
    out.n = n;
    out.value = Rat(best);
    return out;
}

/// Exact |F(A_n) cap A_n| / |A_n| with A_n = [-n, n]^2.
inline GridFolnerReport grid_folner_ratio(const GridMap& f, long long n, unsigned threads = 1) {
    detail::require_window(n);
    auto partials = detail::scan_row_stripes<Int>(n, threads, [&](long long xlo, long long xhi) {
        Int rows = 0;
        for (long long x = xlo; x <= xhi; ++x)
            for (long long y = -n; y <= n; ++y) {
                GridPoint fp = f(GridPoint{Int(x), Int(y)});
                if (fp.x >= -n && fp.x <= n && fp.y >= -n && fp.y <= n) ++rows;
            }
        return rows;
    });
    Int count = 0;
    for (const auto& p : partials) count += p;
    GridFolnerReport out;
    out.n = n;
    out.intersection = count;
    Int side = Int(2) * n + 1;
    out.ratio = Rat(count, side * side);
    return out;
}

}  // namespace lipz
