#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace nilheat {

// Raised when a caller breaks an operation's documented precondition.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct MalformedMatrix : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class GroupTag { Engel, Cartan };

constexpr int dimension(GroupTag tag) { return tag == GroupTag::Engel ? 4 : 5; }
const char* group_name(GroupTag tag);

// Coefficients on the basis l1..l_dim. Unused trailing slots stay zero.
struct AlgebraVector {
    GroupTag tag = GroupTag::Engel;
    std::array<double, 5> a{};
    int dim() const { return dimension(tag); }
    double& operator[](std::size_t i) { return a[i]; }
    double operator[](std::size_t i) const { return a[i]; }
};

// Coordinates (x1..x_dim) of a group element.
struct GroupPoint {
    GroupTag tag = GroupTag::Engel;
    std::array<double, 5> x{};
    int dim() const { return dimension(tag); }
    double& operator[](std::size_t i) { return x[i]; }
    double operator[](std::size_t i) const { return x[i]; }
};

struct TangentVector {
    GroupTag tag = GroupTag::Engel;
    std::array<double, 5> v{};
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
};

// 4x4 (Engel) or 8x8 block diagonal diag(N1, N2) (Cartan), row major.
struct UnipotentMatrix {
    GroupTag tag = GroupTag::Engel;
    std::array<double, 64> m{};
    int size() const { return tag == GroupTag::Engel ? 4 : 8; }
    double& operator()(int i, int j) { return m[i * size() + j]; }
    double operator()(int i, int j) const { return m[i * size() + j]; }
};

GroupPoint identity(GroupTag tag);
GroupPoint make_point(GroupTag tag, std::initializer_list<double> coords);
AlgebraVector make_algebra(GroupTag tag, std::initializer_list<double> coeffs);
AlgebraVector basis(GroupTag tag, int i);  // l_i, 1-based

GroupPoint multiply(const GroupPoint& g, const GroupPoint& h);
GroupPoint inverse(const GroupPoint& g);
GroupPoint exp_coords(const AlgebraVector& a);
AlgebraVector log_coords(const GroupPoint& x);

UnipotentMatrix to_matrix(const GroupPoint& g);
GroupPoint from_matrix(const UnipotentMatrix& m, double tol = 1e-9);
UnipotentMatrix matmul(const UnipotentMatrix& a, const UnipotentMatrix& b);

// Matrix image of an algebra element: M1 (Engel) or diag(M1, M2) (Cartan).
UnipotentMatrix algebra_matrix(const AlgebraVector& a);

// [a, b] from the structure constants; agrees with BA - AB on matrix images.
AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b);

// Components of the left-invariant field X_i at x on d/dx_1..d/dx_dim, 1-based.
TangentVector frame(int i, const GroupPoint& x);

// Cartan automorphism rotating (l1, l2) and (l4, l5) by phi, acting on points.
GroupPoint rotate_cartan(const GroupPoint& x, double phi);

std::string to_string(const GroupPoint& g);

}  // namespace nilheat
