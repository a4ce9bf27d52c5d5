#include "gptnc/geometry.hpp"

#include "gptnc/errors.hpp"
#include "gptnc/lp.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gptnc::geometry {

namespace {

using Bits = boost::dynamic_bitset<>;

struct DdRay {
    Vector x;
    Bits zero;
};

bool lex_less(const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_unique(std::vector<Vector>& pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

Vector lift(const Vector& p) {
    Vector g = p;
    g.push_back(1);
    return g;
}

/// Coordinates of each generator in the basis formed by `basis_rows`.
std::vector<Vector> coordinates_in(const std::vector<Vector>& basis_rows,
                                   const std::vector<Vector>& points, std::size_t dim) {
    Matrix basis = Matrix::from_rows(basis_rows, dim);
    Matrix pts = Matrix::from_rows(points, dim);
    auto coords = solve_left(basis, pts);
    if (!coords) throw DegenerateBody("point outside the computed span");
    return coords->row_list();
}

} // namespace

std::vector<Vector> extreme_rays_of(const std::vector<Vector>& normals, std::size_t dim) {
    for (const auto& a : normals)
        if (a.size() != dim) throw DimensionMismatch("cone normal has wrong length");
    if (dim == 0) return {};
    auto basis_idx = independent_subset(normals, dim);
    if (basis_idx.size() < dim)
        throw NotPointed("cone contains a line (constraint rank " + std::to_string(basis_idx.size()) +
                         " < " + std::to_string(dim) + ")");
    const std::size_t m = normals.size();

    std::vector<Vector> sub;
    for (auto i : basis_idx) sub.push_back(normals[i]);
    auto inv = inverse(Matrix::from_rows(sub, dim));
    std::vector<DdRay> rays;
    for (std::size_t k = 0; k < dim; ++k) {
        DdRay r{primitive(inv->col(k)), Bits(m)};
        for (std::size_t j = 0; j < dim; ++j)
            if (j != k) r.zero.set(basis_idx[j]);
        rays.push_back(std::move(r));
    }

    std::vector<bool> used(m, false);
    for (auto i : basis_idx) used[i] = true;
    for (std::size_t row = 0; row < m; ++row) {
        if (used[row]) continue;
        used[row] = true;
        const Vector& a = normals[row];
        std::vector<Rational> val(rays.size());
        std::vector<std::size_t> pos, neg, zer;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            val[i] = dot(a, rays[i].x);
            int s = sgn(val[i]);
            (s > 0 ? pos : s < 0 ? neg : zer).push_back(i);
        }
        if (neg.empty()) {
            for (auto i : zer) rays[i].zero.set(row);
            continue;
        }
        std::vector<DdRay> next;
        next.reserve(pos.size() + zer.size());
        for (auto i : pos) next.push_back(rays[i]);
        for (auto i : zer) {
            next.push_back(rays[i]);
            next.back().zero.set(row);
        }
        for (auto p : pos)
            for (auto q : neg) {
                Bits common = rays[p].zero & rays[q].zero;
                if (common.count() + 2 < dim) continue;
                bool adjacent = true;
                for (std::size_t w = 0; w < rays.size() && adjacent; ++w) {
                    if (w == p || w == q) continue;
                    if (common.is_subset_of(rays[w].zero)) adjacent = false;
                }
                if (!adjacent) continue;
                Vector x = val[p] * rays[q].x - val[q] * rays[p].x;
                DdRay r{primitive(x), common};
                r.zero.set(row);
                next.push_back(std::move(r));
            }
        rays = std::move(next);
    }
    std::vector<Vector> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.x));
    sort_unique(out);
    return out;
}

ConeFacets cone_facets(const std::vector<Vector>& generators, std::size_t dim) {
    ConeFacets out;
    auto idx = independent_subset(generators, dim);
    std::vector<Vector> basis;
    for (auto i : idx) basis.push_back(generators[i]);
    out.orthogonal = null_space(Matrix::from_rows(generators, dim));
    if (basis.empty()) return out;
    auto coords = coordinates_in(basis, generators, dim);
    auto dual_rays = extreme_rays_of(coords, basis.size());
    // Lift each functional y on span to a normal a inside span with a.B_j = y_j.
    Matrix b = Matrix::from_rows(basis, dim);
    Matrix gram = b * b.transpose();
    auto gram_inv = inverse(gram);
    for (const auto& y : dual_rays) {
        Vector a = b.transpose().apply(gram_inv->apply(y));
        out.normals.push_back(primitive(a));
    }
    sort_unique(out.normals);
    return out;
}

std::vector<Vector> extremal_rays(const Cone& cone) {
    if (!cone.facet_normals.empty()) return extreme_rays_of(cone.facet_normals, cone.dim);
    std::vector<Vector> gens;
    for (const auto& r : cone.rays) {
        if (r.size() != cone.dim) throw DimensionMismatch("cone ray has wrong length");
        if (!is_zero(r)) gens.push_back(r);
    }
    if (gens.empty()) return {};
    auto idx = independent_subset(gens, cone.dim);
    std::vector<Vector> basis;
    for (auto i : idx) basis.push_back(gens[i]);
    auto coords = coordinates_in(basis, gens, cone.dim);
    auto normals = extreme_rays_of(coords, basis.size());
    if (rank(normals, basis.size()) < basis.size()) throw NotPointed("cone contains a line");
    auto rays_in_span = extreme_rays_of(normals, basis.size());
    Matrix bt = Matrix::from_rows(basis, cone.dim).transpose();
    std::vector<Vector> out;
    for (const auto& z : rays_in_span) out.push_back(primitive(bt.apply(z)));
    sort_unique(out);
    return out;
}

std::size_t affine_dimension(const std::vector<Vector>& points) {
    if (points.empty()) throw DegenerateBody("empty point set");
    std::vector<Vector> diffs;
    for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(points[i] - points[0]);
    return rank(diffs, points[0].size());
}

bool in_hull(const std::vector<Vector>& points, const Vector& x) {
    if (points.empty()) return false;
    const std::size_t n = x.size();
    lp::Problem<Rational> p;
    p.num_vars = points.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Rational> row(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) row[i] = points[i][c];
        p.a.push_back(std::move(row));
        p.b.push_back(x[c]);
    }
    p.a.emplace_back(points.size(), Rational(1));
    p.b.push_back(1);
    return lp::solve(p).status == lp::Status::Optimal;
}

std::vector<Vector> canonical_vertices(std::vector<Vector> points) {
    sort_unique(points);
    if (points.size() <= 2) return points;
    std::vector<Vector> kept;
    std::vector<bool> removed(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<Vector> others;
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i && !removed[j]) others.push_back(points[j]);
        if (in_hull(others, points[i])) removed[i] = true;
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!removed[i]) kept.push_back(std::move(points[i]));
    return kept;
}

void compute_facets(ConvexBody& body) {
    body.facets.clear();
    body.equations.clear();
    if (body.vertices.empty()) throw DegenerateBody("body has no vertices");
    std::vector<Vector> lifted;
    for (const auto& v : body.vertices) lifted.push_back(lift(v));
    auto cf = cone_facets(lifted, body.dim + 1);
    auto split = [&](const Vector& a) {
        // a.(x, 1) >= 0  <=>  <-a_x, x> <= a_t
        Facet f;
        f.normal.assign(a.begin(), a.end() - 1);
        for (auto& c : f.normal) c = -c;
        f.offset = a.back();
        return f;
    };
    // A single point has no facets; its lifted ray's only face is the apex.
    if (body.vertices.size() > 1)
        for (const auto& a : cf.normals) body.facets.push_back(split(a));
    for (const auto& w : cf.orthogonal) {
        Vector p = primitive(w);
        body.equations.push_back(split(p));
    }
}

ConvexBody make_body(std::size_t dim, std::vector<Vector> points) {
    for (const auto& p : points)
        if (p.size() != dim) throw DimensionMismatch("point has wrong length");
    if (points.empty()) throw DegenerateBody("empty point set");
    ConvexBody body;
    body.dim = dim;
    body.vertices = canonical_vertices(std::move(points));
    compute_facets(body);
    return body;
}

ConvexBody body_from_facets(std::size_t dim, const std::vector<Facet>& facets,
                            const std::vector<Facet>& equations) {
    std::vector<Vector> rows;
    auto homog = [&](const Facet& f, bool negate) {
        // offset * t - <normal, x> >= 0
        if (f.normal.size() != dim) throw DimensionMismatch("facet normal has wrong length");
        Vector r(dim + 1);
        for (std::size_t i = 0; i < dim; ++i) r[i] = negate ? Rational(f.normal[i]) : Rational(-f.normal[i]);
        r[dim] = negate ? Rational(-f.offset) : f.offset;
        return r;
    };
    for (const auto& f : facets) rows.push_back(homog(f, false));
    for (const auto& e : equations) {
        rows.push_back(homog(e, false));
        rows.push_back(homog(e, true));
    }
    Vector t_pos(dim + 1);
    t_pos[dim] = 1;
    rows.push_back(t_pos);
    std::vector<Vector> rays;
    try {
        rays = extreme_rays_of(rows, dim + 1);
    } catch (const NotPointed&) {
        throw UnboundedBody("inequality system does not describe a bounded body");
    }
    std::vector<Vector> verts;
    for (const auto& r : rays) {
        if (sgn(r[dim]) == 0) throw UnboundedBody("inequality system has a recession direction");
        Vector v(r.begin(), r.end() - 1);
        Rational t = r[dim];
        for (auto& c : v) c /= t;
        verts.push_back(std::move(v));
    }
    if (verts.empty()) throw DegenerateBody("inequality system is infeasible");
    ConvexBody body;
    body.dim = dim;
    sort_unique(verts);
    body.vertices = std::move(verts);
    compute_facets(body);
    return body;
}

bool contains(const ConvexBody& body, const Vector& x) {
    if (x.size() != body.dim) throw DimensionMismatch("contains");
    if (body.facets.empty() && body.equations.empty()) return in_hull(body.vertices, x);
    for (const auto& f : body.facets)
        if (dot(f.normal, x) > f.offset) return false;
    for (const auto& e : body.equations)
        if (dot(e.normal, x) != e.offset) return false;
    return true;
}

Vector barycenter(const ConvexBody& body) {
    if (body.vertices.empty()) throw DegenerateBody("barycenter of empty body");
    Vector c(body.dim);
    for (const auto& v : body.vertices) c = c + v;
    return Rational(1, static_cast<unsigned long>(body.vertices.size())) * c;
}

bool same_set(const ConvexBody& a, const ConvexBody& b) {
    return a.dim == b.dim && a.vertices == b.vertices;
}

ConvexBody dual_body(const ConvexBody& body, const Vector& unit) {
    if (body.vertices.empty()) throw DegenerateBody("dual of empty body");
    if (unit.size() != body.dim) throw DimensionMismatch("unit has wrong length");
    for (const auto& s : body.vertices) {
        if (s.size() != body.dim) throw DimensionMismatch("vertex has wrong length");
        if (dot(unit, s) != 1)
            throw UnnormalizedBody("unit evaluates to " + to_string(dot(unit, s)) + " on a vertex");
    }
    std::vector<Facet> facets;
    for (const auto& s : body.vertices) {
        facets.push_back({Rational(-1) * s, 0});
        facets.push_back({s, 1});
    }
    return body_from_facets(body.dim, facets);
}

bool is_simplex(const ConvexBody& body) {
    if (body.vertices.empty()) throw DegenerateBody("empty body");
    return body.vertices.size() == affine_dimension(body.vertices) + 1;
}

bool is_hypercube(const ConvexBody& body) {
    if (body.vertices.empty()) throw DegenerateBody("empty body");
    const std::size_t k = affine_dimension(body.vertices);
    if (k >= 8 * sizeof(std::size_t) - 1) return false;
    if (body.vertices.size() != (std::size_t{1} << k)) return false;
    ConvexBody b = body;
    if (b.facets.empty() && b.equations.empty()) compute_facets(b);
    if (b.facets.size() != 2 * k) return false;
    if (k == 0) return true;

    const std::size_t n = b.dim;
    auto tight = [&](const Vector& v) {
        std::vector<std::size_t> t;
        for (std::size_t i = 0; i < b.facets.size(); ++i)
            if (dot(b.facets[i].normal, v) == b.facets[i].offset) t.push_back(i);
        return t;
    };
    const Vector& v0 = b.vertices.front();
    auto t0 = tight(v0);
    std::vector<Vector> neighbors;
    for (std::size_t j = 1; j < b.vertices.size(); ++j) {
        auto tj = tight(b.vertices[j]);
        std::vector<std::size_t> common;
        std::set_intersection(t0.begin(), t0.end(), tj.begin(), tj.end(), std::back_inserter(common));
        std::vector<Vector> normals;
        for (auto i : common) normals.push_back(b.facets[i].normal);
        for (const auto& e : b.equations) normals.push_back(e.normal);
        if (rank(normals, n) == n - 1) neighbors.push_back(b.vertices[j]);
    }
    if (neighbors.size() != k) return false;

    // Candidate affine map x -> v0 + sum_i x_i (n_i - v0) from {0,1}^k.
    std::vector<Vector> images;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        Vector p = v0;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) p = p + (neighbors[i] - v0);
        images.push_back(std::move(p));
    }
    sort_unique(images);
    return images == b.vertices;
}

ConvexBody shrink_toward(const ConvexBody& body, const Vector& center, const Rational& r) {
    if (center.size() != body.dim) throw DimensionMismatch("center has wrong length");
    if (r < 0 || r > 1) throw BadParams("shrink ratio must lie in [0, 1]");
    if (!contains(body, center)) throw CenterOutsideBody("center is not inside the body");
    std::vector<Vector> pts;
    Rational keep = 1 - r;
    for (const auto& v : body.vertices) pts.push_back(keep * v + r * center);
    ConvexBody out;
    out.dim = body.dim;
    sort_unique(pts);
    out.vertices = std::move(pts);
    compute_facets(out);
    return out;
}

ConvexBody intersect(const ConvexBody& a, const ConvexBody& b) {
    if (a.dim != b.dim) throw DimensionMismatch("intersect");
    std::vector<Facet> facets = a.facets;
    facets.insert(facets.end(), b.facets.begin(), b.facets.end());
    std::vector<Facet> eqs = a.equations;
    eqs.insert(eqs.end(), b.equations.begin(), b.equations.end());
    return body_from_facets(a.dim, facets, eqs);
}

ConvexBody transform(const ConvexBody& body, const Matrix& map) {
    if (map.cols() != body.dim) throw DimensionMismatch("transform");
    std::vector<Vector> pts;
    for (const auto& v : body.vertices) pts.push_back(map.apply(v));
    return make_body(map.rows(), std::move(pts));
}

double vertex_hausdorff(const ConvexBody& a, const ConvexBody& b) {
    auto directed = [](const ConvexBody& x, const ConvexBody& y) {
        double worst = 0;
        for (const auto& v : x.vertices) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& w : y.vertices) {
                double d = 0;
                for (std::size_t i = 0; i < v.size(); ++i) d = std::max(d, std::fabs(Rational(v[i] - w[i]).get_d()));
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    if (a.dim != b.dim) throw DimensionMismatch("vertex_hausdorff");
    return std::max(directed(a, b), directed(b, a));
}

} // namespace gptnc::geometry
