#pragma once

#include "modheat/errors.hpp"
#include "modheat/rational.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace modheat {

/// A finite weighted graph: vertices with string ids and a symmetric nonnegative
/// weight function held as exact rationals. Self-loops are stored once and are
/// counted once in the degree sum d_u = sum_v w(u,v).
class WeightedGraph {
public:
    std::size_t add_vertex(std::string label) {
        auto [it, inserted] = index_.emplace(label, labels_.size());
        if (!inserted) throw std::invalid_argument("add_vertex: duplicate label " + label);
        labels_.push_back(std::move(label));
        adj_.emplace_back();
        return labels_.size() - 1;
    }

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t v) const { return labels_.at(v); }

    std::optional<std::size_t> find_vertex(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t vertex(const std::string& label) const {
        auto v = find_vertex(label);
        if (!v) throw std::invalid_argument("unknown vertex " + label);
        return *v;
    }

    void set_weight(std::size_t u, std::size_t v, Rational w) {
        check_vertex(u);
        check_vertex(v);
        if (w < 0) throw std::invalid_argument("set_weight: negative weight");
        if (w == 0) {
            adj_[u].erase(v);
            adj_[v].erase(u);
            return;
        }
        adj_[u][v] = w;
        adj_[v][u] = std::move(w);
    }

    void add_weight(std::size_t u, std::size_t v, const Rational& w) {
        set_weight(u, v, weight(u, v) + w);
    }

    Rational weight(std::size_t u, std::size_t v) const {
        check_vertex(u);
        check_vertex(v);
        auto it = adj_[u].find(v);
        return it == adj_[u].end() ? Rational(0) : it->second;
    }

    /// Neighbors of u (including u itself when a loop is present), ordered by index.
    const std::map<std::size_t, Rational>& neighbors(std::size_t u) const {
        check_vertex(u);
        return adj_[u];
    }

    Rational degree(std::size_t u) const {
        check_vertex(u);
        Rational d = 0;
        for (const auto& [v, w] : adj_[u]) d += w;
        return d;
    }

    bool is_connected() const {
        if (size() == 0) return true;
        std::vector<char> seen(size(), 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : adj_[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
            }
        }
        return reached == size();
    }

    /// L(u,v) = delta_{u,v} - w(u,v)/sqrt(d_u d_v). Throws when a degree vanishes.
    Eigen::MatrixXd normalized_laplacian() const {
        Eigen::MatrixXd m = m_matrix();
        Eigen::MatrixXd l = Eigen::MatrixXd::Identity(m.rows(), m.cols()) - m;
        return l;
    }

    /// M(u,v) = w(u,v)/sqrt(d_u d_v), so L = I - M.
    Eigen::MatrixXd m_matrix() const {
        const auto d = degrees_as_double();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size()),
                                                  static_cast<Eigen::Index>(size()));
        for (std::size_t u = 0; u < size(); ++u) {
            for (const auto& [v, w] : adj_[u]) {
                m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) =
                    to_double(w) / std::sqrt(d[u] * d[v]);
            }
        }
        return m;
    }

    /// Exact M matrix over Q[sqrt(2)]. Requires every product d_u d_v on an edge
    /// to be a square or twice a square; holds for all graphs in this toolkit,
    /// whose degrees are powers of two times squares.
    std::vector<std::vector<Sqrt2Number>> m_matrix_exact() const {
        std::vector<Rational> d(size());
        for (std::size_t u = 0; u < size(); ++u) {
            d[u] = degree(u);
            if (d[u] == 0) throw std::invalid_argument("m_matrix_exact: zero degree");
        }
        std::vector<std::vector<Sqrt2Number>> m(size(), std::vector<Sqrt2Number>(size()));
        for (std::size_t u = 0; u < size(); ++u) {
            for (const auto& [v, w] : adj_[u]) {
                auto root = sqrt_in_field(d[u] * d[v]);
                if (!root) {
                    throw std::invalid_argument(
                        "m_matrix_exact: sqrt(d_u d_v) is not in Q[sqrt(2)]");
                }
                m[u][v] = Sqrt2Number(w) / *root;
            }
        }
        return m;
    }

    std::vector<std::vector<Sqrt2Number>> normalized_laplacian_exact() const {
        auto m = m_matrix_exact();
        for (std::size_t u = 0; u < size(); ++u) {
            for (std::size_t v = 0; v < size(); ++v) m[u][v] = -m[u][v];
            m[u][u] += Sqrt2Number(Rational(1));
        }
        return m;
    }

    std::vector<double> degrees_as_double() const {
        std::vector<double> d(size());
        for (std::size_t u = 0; u < size(); ++u) {
            d[u] = to_double(degree(u));
            if (d[u] <= 0) throw std::invalid_argument("graph has a zero-degree vertex");
        }
        return d;
    }

    /// Line-oriented serialization: one edge per line as `u v num/den`,
    /// loops written once. Vertices are emitted in index order on first use.
    void write(std::ostream& os) const {
        for (std::size_t u = 0; u < size(); ++u) {
            for (const auto& [v, w] : adj_[u]) {
                if (v < u) continue;
                os << labels_[u] << ' ' << labels_[v] << ' '
                   << boost::multiprecision::numerator(w) << '/'
                   << boost::multiprecision::denominator(w) << '\n';
            }
        }
    }

    static WeightedGraph read(std::istream& is) {
        WeightedGraph g;
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string lu, lv, lw;
            if (!(ls >> lu >> lv >> lw)) throw std::invalid_argument("graph read: bad line: " + line);
            auto u = g.find_vertex(lu) ? *g.find_vertex(lu) : g.add_vertex(lu);
            auto v = g.find_vertex(lv) ? *g.find_vertex(lv) : g.add_vertex(lv);
            g.set_weight(u, v, parse_rational(lw));
        }
        return g;
    }

    static Rational parse_rational(const std::string& text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(Integer(text));
            Integer num(text.substr(0, slash));
            Integer den(text.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("zero denominator");
            return Rational(num, den);
        } catch (const std::exception&) {
            throw std::invalid_argument("graph read: bad rational: " + text);
        }
    }

private:
    void check_vertex(std::size_t v) const {
        if (v >= labels_.size()) throw std::invalid_argument("vertex index out of range");
    }

    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::map<std::size_t, Rational>> adj_;
};

/// A total map between vertex sets, stored as source index -> target index.
struct VertexMap {
    std::vector<std::size_t> to;

    std::vector<std::vector<std::size_t>> fibers(std::size_t target_size) const {
        std::vector<std::vector<std::size_t>> f(target_size);
        for (std::size_t x = 0; x < to.size(); ++x) {
            if (to[x] >= target_size) throw std::invalid_argument("VertexMap: target out of range");
            f[to[x]].push_back(x);
        }
        return f;
    }
};

/// Disjoint blocks covering the vertex set, each with a label for the quotient vertex.
struct Partition {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::string> labels;

    void validate(std::size_t n) const {
        if (labels.size() != blocks.size()) throw std::invalid_argument("Partition: label count");
        std::vector<char> seen(n, 0);
        std::size_t covered = 0;
        for (const auto& block : blocks) {
            if (block.empty()) throw std::invalid_argument("Partition: empty block");
            for (auto v : block) {
                if (v >= n || seen[v]) throw std::invalid_argument("Partition: not a partition");
                seen[v] = 1;
                ++covered;
            }
        }
        if (covered != n) throw std::invalid_argument("Partition: does not cover the vertex set");
    }
};

/// Quotient weighted graph: block-to-block weights are the ordered sums
/// w(U,V) = sum_{x in U, y in V} w(x,y); intra-block weight becomes a loop.
/// Returns the quotient together with the canonical projection map.
inline std::pair<WeightedGraph, VertexMap> quotient(const WeightedGraph& g, const Partition& part) {
    part.validate(g.size());
    WeightedGraph q;
    for (const auto& label : part.labels) q.add_vertex(label);

    VertexMap proj;
    proj.to.assign(g.size(), 0);
    for (std::size_t b = 0; b < part.blocks.size(); ++b) {
        for (auto v : part.blocks[b]) proj.to[v] = b;
    }

    for (std::size_t u = 0; u < g.size(); ++u) {
        for (const auto& [v, w] : g.neighbors(u)) {
            if (v < u) continue;
            const std::size_t bu = proj.to[u];
            const std::size_t bv = proj.to[v];
            if (bu == bv) {
                // Ordered pairs within a block: (x,y) and (y,x) for x != y, once for a loop.
                q.add_weight(bu, bu, u == v ? w : 2 * w);
            } else {
                q.add_weight(bu, bv, w);
            }
        }
    }
    return {std::move(q), std::move(proj)};
}

struct CoveringWitness {
    std::size_t x = 0;  // source vertex
    std::size_t u = 0;  // target vertex
    Rational lhs;       // sum_{z in fiber(u)} w~(z, x)
    Rational rhs;       // w(u, f(x)) / |fiber(f(x))|
};

struct CoveringCheck {
    bool ok = false;
    std::optional<CoveringWitness> witness;
};

/// Exact check of the covering identity
///   sum_{z in fiber(u)} w~(z,x) = w(u, f(x)) / |fiber(f(x))|
/// for every pair (x, u). On failure the first violating pair is returned as a
/// witness together with both sides. f must be total and surjective.
inline CoveringCheck is_covering(const WeightedGraph& src, const WeightedGraph& dst,
                                 const VertexMap& f) {
    if (f.to.size() != src.size()) throw std::invalid_argument("is_covering: map is not total");
    const auto fibers = f.fibers(dst.size());
    for (const auto& fiber : fibers) {
        if (fiber.empty()) throw std::invalid_argument("is_covering: map is not surjective");
    }
    for (std::size_t x = 0; x < src.size(); ++x) {
        // Group the weights at x by the block of the other endpoint.
        std::map<std::size_t, Rational> by_block;
        for (const auto& [z, w] : src.neighbors(x)) by_block[f.to[z]] += w;
        const std::size_t fx = f.to[x];
        const Rational fiber_count(static_cast<std::int64_t>(fibers[fx].size()));
        for (std::size_t u = 0; u < dst.size(); ++u) {
            auto it = by_block.find(u);
            const Rational lhs = it == by_block.end() ? Rational(0) : it->second;
            const Rational rhs = dst.weight(u, fx) / fiber_count;
            if (lhs != rhs) {
                return {false, CoveringWitness{x, u, lhs, rhs}};
            }
        }
    }
    return {true, std::nullopt};
}

/// Exact check of the degree relation d~_x = d_{f(x)} / |fiber(f(x))|.
inline bool degree_transfer_check(const WeightedGraph& src, const WeightedGraph& dst,
                                  const VertexMap& f) {
    const auto fibers = f.fibers(dst.size());
    std::vector<Rational> dst_degree(dst.size());
    for (std::size_t u = 0; u < dst.size(); ++u) dst_degree[u] = dst.degree(u);
    for (std::size_t x = 0; x < src.size(); ++x) {
        const std::size_t u = f.to[x];
        if (src.degree(x) * static_cast<std::int64_t>(fibers[u].size()) != dst_degree[u]) {
            return false;
        }
    }
    return true;
}

namespace detail {

/// Compressed sparse rows of M = D^{-1/2} W D^{-1/2} in double precision.
struct SparseM {
    std::vector<std::size_t> row_begin;
    std::vector<std::size_t> col;
    std::vector<double> val;

    static SparseM build(const WeightedGraph& g, std::span<const double> degree_override = {}) {
        std::vector<double> d;
        if (degree_override.empty()) {
            d = g.degrees_as_double();
        } else {
            if (degree_override.size() != g.size()) {
                throw std::invalid_argument("degree override size mismatch");
            }
            d.assign(degree_override.begin(), degree_override.end());
        }
        SparseM m;
        m.row_begin.reserve(g.size() + 1);
        m.row_begin.push_back(0);
        for (std::size_t u = 0; u < g.size(); ++u) {
            for (const auto& [v, w] : g.neighbors(u)) {
                m.col.push_back(v);
                m.val.push_back(to_double(w) / std::sqrt(d[u] * d[v]));
            }
            m.row_begin.push_back(m.col.size());
        }
        return m;
    }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        const std::size_t n = row_begin.size() - 1;
        y.assign(n, 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            double acc = 0.0;
            for (std::size_t k = row_begin[u]; k < row_begin[u + 1]; ++k) {
                acc += val[k] * x[col[k]];
            }
            y[u] = acc;
        }
    }
};

}  // namespace detail

struct HeatSeriesResult {
    std::vector<double> values;  // e^{-t} sum_{k<=terms} t^k/k! (M^k e_x), indexed by vertex
    double tail_bound = 0.0;     // rigorous uniform bound on the dropped remainder
};

/// Truncated heat series h_t e_x = e^{-t} sum_k t^k/k! M^k e_x.
///
/// The remainder obeys |sum_{k>K} e^{-t} t^k/k! M^k(u,v)| <= e^{-t} sum_{k>K} t^k/k!
/// because |M^k(u,v)| <= 1 for the self-adjoint contraction M; the returned bound
/// is the geometric majorant of that Poisson tail.
///
/// `degree_override` substitutes the degrees used in the normalization; passing
/// the infinite-graph degrees makes entries exact (up to roundoff) for vertices
/// whose distance to the truncation boundary exceeds the path lengths involved.
inline HeatSeriesResult heat_series(const WeightedGraph& g, std::size_t x, double t, int terms,
                                    std::span<const double> degree_override = {}) {
    if (x >= g.size()) throw std::invalid_argument("heat_series: unknown vertex");
    if (t < 0) throw std::invalid_argument("heat_series: t must be >= 0");
    if (terms < 0) throw std::invalid_argument("heat_series: terms must be >= 0");

    const auto m = detail::SparseM::build(g, degree_override);
    std::vector<double> v(g.size(), 0.0), next;
    v[x] = 1.0;

    HeatSeriesResult out;
    out.values.assign(g.size(), 0.0);
    double coeff = std::exp(-t);  // e^{-t} t^k / k!
    for (int k = 0;; ++k) {
        for (std::size_t i = 0; i < g.size(); ++i) out.values[i] += coeff * v[i];
        if (k == terms) {
            coeff *= t / (k + 1);
            break;
        }
        m.apply(v, next);
        v.swap(next);
        coeff *= t / (k + 1);
    }
    // coeff is now the first dropped Poisson weight e^{-t} t^{K+1}/(K+1)!.
    if (t < terms + 2) {
        out.tail_bound = coeff / (1.0 - t / (terms + 2));
    } else {
        out.tail_bound = 1.0;
    }
    return out;
}

struct MeqWitness {
    int k = 0;
    std::size_t u = 0;  // target vertex
    std::size_t y = 0;  // source vertex
    double lhs = 0.0;
    double rhs = 0.0;
};

struct MeqReport {
    bool ok = false;
    double max_abs_err = 0.0;
    std::optional<MeqWitness> witness;
};

/// Verifies the power-transfer identity
///   sum_{x in fiber(u)} M~^k(x,y) = sqrt(|fiber(u)|/|fiber(v)|) M^k(u,v),  v = f(y),
/// for all k <= k_max and all pairs (u, y) accepted by `safe`, in double precision.
template <class SafePredicate>
MeqReport meq_check(const WeightedGraph& src, const WeightedGraph& dst, const VertexMap& f,
                    int k_max, double tol, SafePredicate&& safe) {
    const auto fibers = f.fibers(dst.size());
    const auto msrc = detail::SparseM::build(src);
    const Eigen::MatrixXd mdst = dst.m_matrix();

    std::vector<double> scale(dst.size());  // sqrt(|fiber(u)|) indexed by u
    for (std::size_t u = 0; u < dst.size(); ++u) {
        scale[u] = std::sqrt(static_cast<double>(fibers[u].size()));
    }

    // Dense powers of the target M (the target is small).
    std::vector<Eigen::MatrixXd> mk{Eigen::MatrixXd::Identity(mdst.rows(), mdst.cols())};
    for (int k = 1; k <= k_max; ++k) mk.push_back(mk.back() * mdst);

    MeqReport report;
    report.ok = true;
    std::vector<double> v(src.size(), 0.0), next;
    for (std::size_t y = 0; y < src.size(); ++y) {
        const std::size_t fy = f.to[y];
        std::fill(v.begin(), v.end(), 0.0);
        v[y] = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            if (k > 0) {
                msrc.apply(v, next);
                v.swap(next);
            }
            if (!safe(y, k)) continue;
            for (std::size_t u = 0; u < dst.size(); ++u) {
                double lhs = 0.0;
                for (auto x : fibers[u]) lhs += v[x];
                const double rhs = scale[u] / scale[fy] *
                                   mk[static_cast<std::size_t>(k)](
                                       static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(fy));
                const double err = std::abs(lhs - rhs);
                if (err > report.max_abs_err) report.max_abs_err = err;
                if (err > tol && report.ok) {
                    report.ok = false;
                    report.witness = MeqWitness{k, u, y, lhs, rhs};
                }
            }
        }
    }
    return report;
}

inline MeqReport meq_check(const WeightedGraph& src, const WeightedGraph& dst, const VertexMap& f,
                           int k_max, double tol) {
    return meq_check(src, dst, f, k_max, tol, [](std::size_t, int) { return true; });
}

/// Exact-mode verification of the same identity over Q[sqrt(2)], restricted to
/// source vertices accepted by `safe` (checked at every k <= k_max).
template <class SafePredicate>
bool meq_check_exact(const WeightedGraph& src, const WeightedGraph& dst, const VertexMap& f,
                     int k_max, SafePredicate&& safe) {
    const auto fibers = f.fibers(dst.size());
    const auto msrc = src.m_matrix_exact();
    const auto mdst = dst.m_matrix_exact();

    std::vector<Sqrt2Number> scale_sq(dst.size());
    for (std::size_t u = 0; u < dst.size(); ++u) {
        auto root = sqrt_in_field(Rational(static_cast<std::int64_t>(fibers[u].size())));
        if (!root) return false;  // fiber sizes here are powers of two
        scale_sq[u] = *root;
    }

    const std::size_t n = dst.size();
    // Dense powers of the small target matrix.
    std::vector<std::vector<std::vector<Sqrt2Number>>> mk;
    mk.emplace_back(n, std::vector<Sqrt2Number>(n));
    for (std::size_t i = 0; i < n; ++i) mk[0][i][i] = Sqrt2Number(Rational(1));
    for (int k = 1; k <= k_max; ++k) {
        std::vector<std::vector<Sqrt2Number>> p(n, std::vector<Sqrt2Number>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Sqrt2Number acc;
                for (std::size_t l = 0; l < n; ++l) {
                    if (!mk.back()[i][l].is_zero() && !mdst[l][j].is_zero()) {
                        acc += mk.back()[i][l] * mdst[l][j];
                    }
                }
                p[i][j] = acc;
            }
        }
        mk.push_back(std::move(p));
    }

    std::vector<Sqrt2Number> v(src.size()), next(src.size());
    for (std::size_t y = 0; y < src.size(); ++y) {
        bool any = false;
        for (int k = 0; k <= k_max; ++k) any = any || safe(y, k);
        if (!any) continue;
        const std::size_t fy = f.to[y];
        std::fill(v.begin(), v.end(), Sqrt2Number{});
        v[y] = Sqrt2Number(Rational(1));
        for (int k = 0; k <= k_max; ++k) {
            if (k > 0) {
                for (std::size_t i = 0; i < src.size(); ++i) {
                    Sqrt2Number acc;
                    for (std::size_t j = 0; j < src.size(); ++j) {
                        if (!msrc[i][j].is_zero() && !v[j].is_zero()) acc += msrc[i][j] * v[j];
                    }
                    next[i] = acc;
                }
                v.swap(next);
            }
            if (!safe(y, k)) continue;
            for (std::size_t u = 0; u < dst.size(); ++u) {
                Sqrt2Number lhs;
                for (auto x : fibers[u]) lhs += v[x];
                const Sqrt2Number rhs =
                    scale_sq[u] / scale_sq[fy] * mk[static_cast<std::size_t>(k)][u][fy];
                if (lhs != rhs) return false;
            }
        }
    }
    return true;
}

}  // namespace modheat
