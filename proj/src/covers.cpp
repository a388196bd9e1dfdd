#include <twistorlab/covers.hpp>

namespace twistorlab {

namespace {

void check_same_lattice(const DivisorClass& a, const DivisorClass& b, const char* who) {
    require(a.lattice.name == b.lattice.name && a.lattice.form == b.lattice.form,
            std::string(who) + ": divisor classes live on different lattices (" +
                a.lattice.name + " vs " + b.lattice.name + ")");
}

}  // namespace

PicardLattice lattice_p1() {
    PicardLattice l;
    l.name = "p1";
    l.rank = 1;
    l.form = Eigen::MatrixXi::Constant(1, 1, 1);
    l.k = Eigen::VectorXi::Constant(1, -2);
    l.labels = {"p"};
    return l;
}

PicardLattice lattice_hirzebruch(int n) {
    require(n >= 0, "lattice_hirzebruch: the twist n must be nonnegative");
    PicardLattice l;
    l.name = "sigma" + std::to_string(n);
    l.rank = 2;
    l.form.resize(2, 2);
    l.form << -n, 1, 1, 0;
    l.k.resize(2);
    l.k << -2, -(n + 2);
    l.labels = {"e", "f"};
    return l;
}

PicardLattice lattice_by_name(const std::string& name) {
    if (name == "p1") return lattice_p1();
    if (name.rfind("sigma", 0) == 0 && name.size() > 5) {
        int n = 0;
        bool digits = true;
        for (std::size_t i = 5; i < name.size(); ++i) {
            if (name[i] < '0' || name[i] > '9') {
                digits = false;
                break;
            }
            n = n * 10 + (name[i] - '0');
        }
        if (digits) return lattice_hirzebruch(n);
    }
    throw ContractError("lattice_by_name: unknown lattice \"" + name +
                        "\" (expected p1 or sigmaN)");
}

DivisorClass divisor(const PicardLattice& lattice, const Eigen::VectorXi& coords) {
    require(coords.size() == lattice.rank,
            "divisor: coordinate length does not match the lattice rank");
    return {lattice, coords};
}

long long intersect(const DivisorClass& a, const DivisorClass& b) {
    check_same_lattice(a, b, "intersect");
    long long acc = 0;
    for (int i = 0; i < a.lattice.rank; ++i)
        for (int j = 0; j < a.lattice.rank; ++j)
            acc += static_cast<long long>(a.coords[i]) * a.lattice.form(i, j) * b.coords[j];
    return acc;
}

CoverCanonical adjoint_cover_canonical(const DivisorClass& k_x, const DivisorClass& d) {
    check_same_lattice(k_x, d, "adjoint_cover_canonical");
    CoverCanonical out;
    for (int i = 0; i < d.lattice.rank; ++i) {
        if (d.coords[i] % 2 != 0) {
            out.odd_axis = i;
            out.odd_label = d.lattice.labels[i];
            return out;
        }
    }
    const Eigen::VectorXi half = d.coords / 2;
    out.l = DivisorClass{d.lattice, half};
    out.k_cover = DivisorClass{d.lattice, Eigen::VectorXi(k_x.coords + half)};
    return out;
}

bool cy_check(const DivisorClass& k_x, const DivisorClass& d) {
    check_same_lattice(k_x, d, "cy_check");
    return d.coords == Eigen::VectorXi(-2 * k_x.coords);
}

}  // namespace twistorlab
