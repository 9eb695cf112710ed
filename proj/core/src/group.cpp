#include "nilheat/group.hpp"

#include <cmath>
#include <sstream>

namespace nilheat {

namespace {

void require_same(GroupTag a, GroupTag b, const char* op) {
    if (a != b) throw ContractViolation(std::string(op) + ": group tag mismatch");
}

void require_finite(const std::array<double, 5>& v, int n, const char* op) {
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(v[i])) throw ContractViolation(std::string(op) + ": non-finite coordinate");
}

}  // namespace

const char* group_name(GroupTag tag) { return tag == GroupTag::Engel ? "g4" : "g5"; }

GroupPoint identity(GroupTag tag) { return GroupPoint{tag, {}}; }

GroupPoint make_point(GroupTag tag, std::initializer_list<double> coords) {
    if (static_cast<int>(coords.size()) != dimension(tag))
        throw ContractViolation("make_point: arity does not match group dimension");
    GroupPoint g{tag, {}};
    std::size_t i = 0;
    for (double c : coords) g.x[i++] = c;
    return g;
}

AlgebraVector make_algebra(GroupTag tag, std::initializer_list<double> coeffs) {
    if (static_cast<int>(coeffs.size()) != dimension(tag))
        throw ContractViolation("make_algebra: arity does not match group dimension");
    AlgebraVector a{tag, {}};
    std::size_t i = 0;
    for (double c : coeffs) a.a[i++] = c;
    return a;
}

AlgebraVector basis(GroupTag tag, int i) {
    if (i < 1 || i > dimension(tag)) throw ContractViolation("basis: index out of range");
    AlgebraVector a{tag, {}};
    a.a[i - 1] = 1.0;
    return a;
}

GroupPoint multiply(const GroupPoint& g, const GroupPoint& h) {
    require_same(g.tag, h.tag, "multiply");
    const auto& x = g.x;
    const auto& y = h.x;
    GroupPoint r{g.tag, {}};
    r.x[0] = x[0] + y[0];
    r.x[1] = x[1] + y[1];
    r.x[2] = x[2] + y[2] - x[0] * y[1];
    r.x[3] = x[3] + y[3] + 0.5 * x[0] * x[0] * y[1] - x[0] * y[2];
    if (g.tag == GroupTag::Cartan)
        r.x[4] = x[4] + y[4] + 0.5 * x[0] * y[1] * y[1] - x[1] * y[2] + x[0] * x[1] * y[1];
    return r;
}

// Solving g * y = e coordinate by coordinate:
//   y1 = -x1, y2 = -x2, y3 = -x3 - x1 x2,
//   y4 = -x4 - x1^2 x2 / 2 - x1 x3,
//   y5 = -x5 - x1 x2^2 / 2 - x2 x3.
GroupPoint inverse(const GroupPoint& g) {
    const auto& x = g.x;
    GroupPoint r{g.tag, {}};
    r.x[0] = -x[0];
    r.x[1] = -x[1];
    r.x[2] = -x[2] - x[0] * x[1];
    r.x[3] = -x[3] - 0.5 * x[0] * x[0] * x[1] - x[0] * x[2];
    if (g.tag == GroupTag::Cartan) r.x[4] = -x[4] - 0.5 * x[0] * x[1] * x[1] - x[1] * x[2];
    return r;
}

// The series exp(M) terminates at M^3. The x5 coefficient of a1 a2^2 is 1/3;
// it is what both the N2 block of exp(diag(M1, M2)) and the product law give.
GroupPoint exp_coords(const AlgebraVector& a) {
    const auto& c = a.a;
    GroupPoint r{a.tag, {}};
    r.x[0] = c[0];
    r.x[1] = c[1];
    r.x[2] = c[2] - c[0] * c[1] / 2.0;
    r.x[3] = c[3] + c[0] * c[0] * c[1] / 6.0 - c[0] * c[2] / 2.0;
    if (a.tag == GroupTag::Cartan) r.x[4] = c[4] + c[0] * c[1] * c[1] / 3.0 - c[1] * c[2] / 2.0;
    return r;
}

AlgebraVector log_coords(const GroupPoint& g) {
    const auto& x = g.x;
    AlgebraVector r{g.tag, {}};
    r.a[0] = x[0];
    r.a[1] = x[1];
    r.a[2] = x[2] + x[0] * x[1] / 2.0;
    r.a[3] = x[3] - x[0] * x[0] * x[1] / 6.0 + x[0] * r.a[2] / 2.0;
    if (g.tag == GroupTag::Cartan) r.a[4] = x[4] - x[0] * x[1] * x[1] / 3.0 + x[1] * r.a[2] / 2.0;
    return r;
}

UnipotentMatrix to_matrix(const GroupPoint& g) {
    require_finite(g.x, g.dim(), "to_matrix");
    const auto& x = g.x;
    UnipotentMatrix m{g.tag, {}};
    for (int i = 0; i < m.size(); ++i) m(i, i) = 1.0;
    m(0, 1) = -x[0];
    m(0, 2) = 0.5 * x[0] * x[0];
    m(0, 3) = x[3];
    m(1, 2) = -x[0];
    m(1, 3) = x[2];
    m(2, 3) = x[1];
    if (g.tag == GroupTag::Cartan) {
        m(4, 5) = x[1];
        m(4, 6) = 0.5 * x[1] * x[1];
        m(4, 7) = x[4] - 0.5 * x[0] * x[1] * x[1];
        m(5, 6) = x[1];
        m(5, 7) = -x[2] - x[0] * x[1];
        m(6, 7) = -x[0];
    }
    return m;
}

GroupPoint from_matrix(const UnipotentMatrix& m, double tol) {
    GroupPoint g{m.tag, {}};
    g.x[0] = -m(0, 1);
    g.x[1] = m(2, 3);
    g.x[2] = m(1, 3);
    g.x[3] = m(0, 3);
    if (m.tag == GroupTag::Cartan) g.x[4] = m(4, 7) + 0.5 * g.x[0] * g.x[1] * g.x[1];
    require_finite(g.x, g.dim(), "from_matrix");
    const UnipotentMatrix expect = to_matrix(g);
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            if (!(std::abs(m(i, j) - expect(i, j)) <= tol)) {
                std::ostringstream os;
                os << "from_matrix: entry (" << i << "," << j << ") = " << m(i, j) << " breaks the unipotent pattern (expected "
                   << expect(i, j) << ")";
                throw MalformedMatrix(os.str());
            }
    return g;
}

UnipotentMatrix matmul(const UnipotentMatrix& a, const UnipotentMatrix& b) {
    require_same(a.tag, b.tag, "matmul");
    UnipotentMatrix c{a.tag, {}};
    const int n = a.size();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

UnipotentMatrix algebra_matrix(const AlgebraVector& v) {
    const auto& a = v.a;
    UnipotentMatrix m{v.tag, {}};
    m(0, 1) = -a[0];
    m(0, 3) = a[3];
    m(1, 2) = -a[0];
    m(1, 3) = a[2];
    m(2, 3) = a[1];
    if (v.tag == GroupTag::Cartan) {
        m(4, 5) = a[1];
        m(4, 7) = a[4];
        m(5, 6) = a[1];
        m(5, 7) = -a[2];
        m(6, 7) = -a[0];
    }
    return m;
}

// Nonzero structure constants: [l1,l2] = l3, [l1,l3] = l4 and, for Cartan, [l2,l3] = l5.
AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
    require_same(u.tag, v.tag, "bracket");
    const auto& a = u.a;
    const auto& b = v.a;
    AlgebraVector r{u.tag, {}};
    r.a[2] = a[0] * b[1] - a[1] * b[0];
    r.a[3] = a[0] * b[2] - a[2] * b[0];
    if (u.tag == GroupTag::Cartan) r.a[4] = a[1] * b[2] - a[2] * b[1];
    return r;
}

TangentVector frame(int i, const GroupPoint& g) {
    if (i < 1 || i > g.dim()) throw ContractViolation("frame: index out of range");
    const auto& x = g.x;
    TangentVector t{g.tag, {}};
    switch (i) {
        case 2:
            t.v[1] = 1.0;
            t.v[2] = -x[0];
            t.v[3] = 0.5 * x[0] * x[0];
            if (g.tag == GroupTag::Cartan) t.v[4] = x[0] * x[1];
            break;
        case 3:
            t.v[2] = 1.0;
            t.v[3] = -x[0];
            if (g.tag == GroupTag::Cartan) t.v[4] = -x[1];
            break;
        default:
            t.v[i - 1] = 1.0;
    }
    return t;
}

GroupPoint rotate_cartan(const GroupPoint& g, double phi) {
    if (g.tag != GroupTag::Cartan) throw ContractViolation("rotate_cartan: Cartan point required");
    const AlgebraVector a = log_coords(g);
    const double c = std::cos(phi), s = std::sin(phi);
    AlgebraVector r{GroupTag::Cartan, {}};
    r.a[0] = c * a.a[0] - s * a.a[1];
    r.a[1] = s * a.a[0] + c * a.a[1];
    r.a[2] = a.a[2];
    r.a[3] = c * a.a[3] - s * a.a[4];
    r.a[4] = s * a.a[3] + c * a.a[4];
    return exp_coords(r);
}

std::string to_string(const GroupPoint& g) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (int i = 0; i < g.dim(); ++i) os << (i ? "," : "") << g.x[i];
    os << ")";
    return os.str();
}

}  // namespace nilheat
