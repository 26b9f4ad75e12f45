#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "lieder/algebra.hpp"
#include "lieder/derspaces.hpp"

namespace fixtures {

using namespace lieder;

inline PolyVectorField mono(std::size_t n, Exponents e, std::size_t dir) { return monomial_field(n, std::move(e), dir); }
inline PolyVectorField dx(std::size_t n, std::size_t i) { return constant_field(n, i); }

/// <d/dx, d/dy, x d/dx, y d/dy>
inline GradedAlgebra plane_diagonal() {
    return close_and_grade({2, {dx(2, 0), dx(2, 1), diagonal_field(2, 0), diagonal_field(2, 1)}, {}});
}

/// <d/dx, d/dy, E, x d/dy>
inline GradedAlgebra plane_shear() {
    return close_and_grade({2, {dx(2, 0), dx(2, 1), euler(2), mono(2, {1, 0}, 1)}, {}});
}

/// <d/dx, d/dy, E>
inline GradedAlgebra plane_euler() { return close_and_grade({2, {dx(2, 0), dx(2, 1), euler(2)}, {}}); }

/// <d/dx, d/dy, d/dz, E, x d/dz, x^2 d/dz>
inline GradedAlgebra space_quadratic() {
    return close_and_grade({3, {dx(3, 0), dx(3, 1), dx(3, 2), euler(3), mono(3, {1, 0, 0}, 2), mono(3, {2, 0, 0}, 2)}, {}});
}

/// d/dx, d/dy, x d/dx, y d/dy and y^k d/dx for k = 1..5, closed under cap 4.
inline GradedAlgebra plane_tower_cap4() {
    std::vector<PolyVectorField> g{dx(2, 0), dx(2, 1), diagonal_field(2, 0), diagonal_field(2, 1)};
    for (unsigned k = 1; k <= 5; ++k) g.push_back(mono(2, {0, k}, 0));
    return close_and_grade({2, g, 4});
}

/// <d/dx, x d/dx, x^2 d/dx>
inline GradedAlgebra line_projective() {
    return close_and_grade({1, {dx(1, 0), mono(1, {1}, 0), mono(1, {2}, 0)}, {}});
}

/// <d/dx, d/dy, d/dz, x d/dx, x d/dy, y d/dy, z d/dz>
inline GradedAlgebra space_shear() {
    return close_and_grade({3, {dx(3, 0), dx(3, 1), dx(3, 2), diagonal_field(3, 0), mono(3, {1, 0, 0}, 1),
                                diagonal_field(3, 1), diagonal_field(3, 2)},
                            {}});
}

/// Map given on basis elements; every other basis element goes to zero.
inline Endo endo_on_basis(const GradedAlgebra& A, const std::vector<std::pair<PolyVectorField, PolyVectorField>>& images) {
    Endo f(A.dim());
    for (const auto& [X, Y] : images) {
        std::size_t q = A.dim();
        for (std::size_t i = 0; i < A.dim(); ++i)
            if (A.basis(i) == X) q = i;
        if (q == A.dim()) throw std::invalid_argument("not a basis element");
        auto y = A.coordinates(Y);
        for (std::size_t p = 0; p < A.dim(); ++p) f(p, q) = y[p];
    }
    return f;
}

}  // namespace fixtures
