#pragma once

#include <optional>
#include <string>
#include <vector>

#include <twistorlab/common.hpp>

namespace twistorlab {

// Divisor-class arithmetic for branched double covers, at the lattice level:
// intersection pairing, canonical classes, square roots of branch divisors,
// and the trivial-canonical-bundle condition.  All arithmetic is exact
// integer arithmetic.

/// Free Picard lattice with a fixed basis, its intersection form, and the
/// canonical class in that basis.
struct PicardLattice {
    std::string name;
    int rank = 0;
    Eigen::MatrixXi form;             // symmetric rank x rank
    Eigen::VectorXi k;                // canonical class coordinates
    std::vector<std::string> labels;  // basis labels, length rank
};

/// The projective line: one basis class p of self-degree 1, K = -2p.
PicardLattice lattice_p1();

/// Hirzebruch surface lattice: basis (e, f) with e.e = -n, e.f = 1, f.f = 0
/// and K = -2e - (n+2)f.
PicardLattice lattice_hirzebruch(int n);

/// Lookup by name: "p1", "sigma0", "sigma1", "sigma2", ... ("sigmaN" for any
/// nonnegative N).  Unknown names raise a contract error.
PicardLattice lattice_by_name(const std::string& name);

struct DivisorClass {
    PicardLattice lattice;
    Eigen::VectorXi coords;
};

/// Divisor class with validated coordinate length.
DivisorClass divisor(const PicardLattice& lattice, const Eigen::VectorXi& coords);

/// Intersection number a.b through the lattice form; exact, symmetric,
/// bilinear.  Both classes must live on the same lattice.
long long intersect(const DivisorClass& a, const DivisorClass& b);

/// Outcome of the double-cover adjunction K_cover = K_X + L with 2L = D.
/// When some coordinate of D is odd the square root L does not exist at the
/// lattice level: l and k_cover are empty and the offending basis coordinate
/// is identified by index and label.
struct CoverCanonical {
    std::optional<DivisorClass> l;
    std::optional<DivisorClass> k_cover;
    int odd_axis = -1;
    std::string odd_label;
};

CoverCanonical adjoint_cover_canonical(const DivisorClass& k_x, const DivisorClass& d);

/// True iff D = -2 K_X coordinatewise, the branch class that makes the double
/// cover's canonical class trivial.
bool cy_check(const DivisorClass& k_x, const DivisorClass& d);

}  // namespace twistorlab
