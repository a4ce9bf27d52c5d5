#pragma once

#include "gptnc/matrix.hpp"
#include "gptnc/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gptnc::geometry {

/// Inequality <normal, x> <= offset (or equality, when stored as an equation).
struct Facet {
    Vector normal;
    Rational offset;
    friend bool operator==(const Facet&, const Facet&) = default;
};

/// A polytope in R^dim. Vertices are the authoritative representation and are
/// kept canonical: convexly independent, lexicographically sorted. `facets`
/// are the irredundant inequalities and `equations` span the affine hull, so
/// {x : facets, equations} is exactly conv(vertices).
struct ConvexBody {
    std::size_t dim = 0;
    std::vector<Vector> vertices;
    std::vector<Facet> facets;
    std::vector<Facet> equations;
};

/// Pointed polyhedral cone, by generators and/or inward normals (<n, x> >= 0).
struct Cone {
    std::size_t dim = 0;
    std::vector<Vector> rays;
    std::vector<Vector> facet_normals;
};

/// Extreme rays of the pointed cone {x : a_i . x >= 0}, by double
/// description with a combinatorial adjacency test. Rays are primitive
/// integer vectors, sorted. Throws NotPointed when rank(A) < dim.
std::vector<Vector> extreme_rays_of(const std::vector<Vector>& inward_normals, std::size_t dim);

/// Minimal generating set of a cone given either way.
std::vector<Vector> extremal_rays(const Cone& cone);

/// Inward facet normals of cone(generators) inside span(generators), plus
/// a basis of the orthogonal complement (the cone's equations).
struct ConeFacets {
    std::vector<Vector> normals;
    std::vector<Vector> orthogonal;
};
ConeFacets cone_facets(const std::vector<Vector>& generators, std::size_t dim);

std::size_t affine_dimension(const std::vector<Vector>& points);

/// Exact LP membership test: x in conv(points).
bool in_hull(const std::vector<Vector>& points, const Vector& x);

/// Deduplicates, removes points inside the hull of the others, sorts.
std::vector<Vector> canonical_vertices(std::vector<Vector> points);

/// Builds a body with both representations from arbitrary generating points.
ConvexBody make_body(std::size_t dim, std::vector<Vector> points);

/// Builds a body from an H-representation. Throws UnboundedBody / DegenerateBody.
ConvexBody body_from_facets(std::size_t dim, const std::vector<Facet>& facets,
                            const std::vector<Facet>& equations = {});

/// Fills facets/equations from canonical vertices.
void compute_facets(ConvexBody& body);

bool contains(const ConvexBody& body, const Vector& x);
Vector barycenter(const ConvexBody& body);

/// Vertex-set equality of canonical bodies.
bool same_set(const ConvexBody& a, const ConvexBody& b);

/// {x : <x, s> in [0, 1] for all s in body}. `unit` must evaluate to 1 on
/// every vertex (UnnormalizedBody otherwise).
ConvexBody dual_body(const ConvexBody& body, const Vector& unit);

bool is_simplex(const ConvexBody& body);
bool is_hypercube(const ConvexBody& body);

/// Vertices v -> (1 - r) v + r center, with r in [0, 1].
ConvexBody shrink_toward(const ConvexBody& body, const Vector& center, const Rational& r);

ConvexBody intersect(const ConvexBody& a, const ConvexBody& b);

/// Applies a linear map to every vertex and re-canonicalizes.
ConvexBody transform(const ConvexBody& body, const Matrix& map);

/// Largest Hausdorff-type vertex deviation in the max norm: each vertex of
/// one body to the nearest vertex of the other (vertex-to-vertex, floats).
double vertex_hausdorff(const ConvexBody& a, const ConvexBody& b);

} // namespace gptnc::geometry
