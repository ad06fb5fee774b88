#pragma once

#include "fdisk/fields.hpp"
#include "fdisk/opers.hpp"

#include <vector>

namespace fdisk {

class FactorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Onto map I -> J of point labels; a_i is sent to b_{map[i]}.
struct Surjection {
    PointSetPtr source, target;
    std::vector<int> map;
    static Surjection make(PointSetPtr source, std::vector<int> map);
    // Smallest fibre size: phi_I maps into phi_J^m R_J, so U_N(I) lands in U_{mN}(J).
    int min_fibre() const;
    nlohmann::json to_json() const;
};

// I = I_1 u I_2 (or more parts); comps[l] carries the points of parts[l] over the
// coefficient ring of I.
struct Decomposition {
    PointSetPtr source;
    std::vector<std::vector<int>> parts;
    std::vector<PointSetPtr> comps;
    static Decomposition make(PointSetPtr source, std::vector<std::vector<int>> parts);
    nlohmann::json to_json() const;
};

DiskFun restrict(const Surjection& s, const DiskFun& f);
ACoeff restrict(const Surjection& s, const ACoeff& c);

// Components of f; component l is exact modulo phi_l^prec with foreign factors
// inverted modulo phi_l^(M+1).
struct Expansion {
    std::vector<PhiTrunc> parts;
    int order = 0;
    nlohmann::json to_json() const;
};
Expansion expand(const Decomposition& d, const DiskFun& f, int M);
// Default order: N + pole order + 1.
int default_order(const DiskFun& f, int N);

LoopElem restrict_loop(const Surjection& s, const LoopElem& x, UAlgebraPtr target);
LoopElem expand_loop(const Decomposition& d, const LoopElem& x, int M, UAlgebraPtr target);
// Image in U_J / U_{min_fibre * N}.
UElem restrict_u(const Surjection& s, const UElem& u, UAlgebraPtr target);
// Image in U_{I_1, I_2} / U_N; series orders are chosen from N.
UElem expand_u(const Decomposition& d, const UElem& u, UAlgebraPtr target);
UElem expand_u(const Decomposition& d, const UElem& u, UAlgebraPtr target, int N);

// Algebra over the components of a decomposition with the same Lie data and level.
UAlgebraPtr component_algebra(const Decomposition& d, const UAlgebraPtr& source);

// Generators X (x) f landing in one component of a multi-component algebra.
class ComponentRealization : public Realization {
public:
    ComponentRealization(UAlgebraPtr alg, int comp) : Realization(alg->points(comp), alg), comp_(comp) {}
    UElem generator(int a, const DiskFun& f, int N) const override;
    std::string name() const override { return "component" + std::to_string(comp_); }

private:
    int comp_;
};

// Rebuild a field tree over another realization (generators, unity and scalars map over).
FieldPtr transplant(const FieldPtr& f, const RealizationPtr& r);

struct FactorReport {
    bool pass = true;
    int checked = 0;
    nlohmann::json counterexamples = nlohmann::json::array();
    nlohmann::json info = nlohmann::json::object();
    void record(bool ok, nlohmann::json where);
    nlohmann::json to_json() const;
};

// restrict(F_I(g)) == F_J(restrict g) modulo U_{mN}, g over the dual basis window.
FactorReport field_factorization_check(const FieldPtr& f, const Surjection& s, int N, int kmin, int kmax);
// expand(F_I(g)) == sum_l F_{I_l}(g_l) modulo U_N.
FactorReport field_factorization_check(const FieldPtr& f, const Decomposition& d, int N, int kmin, int kmax);

// Disk-function level properties on random inputs: ring homomorphism, derivative, residue.
FactorReport restriction_properties(const Surjection& s, int samples, std::mt19937& rng);
FactorReport expansion_properties(const Decomposition& d, int N, int samples, std::mt19937& rng);
// Loop bracket and u_mul compatibility on random generators of degree <= 2.
FactorReport restriction_algebra_properties(const Surjection& s, const LieData& g, const Q& level, int N, int samples,
                                            std::mt19937& rng);
FactorReport expansion_algebra_properties(const Decomposition& d, const LieData& g, const Q& level, int N, int samples,
                                          std::mt19937& rng);

// The centre-oper dictionary against restriction and expansion (sl2, critical level).
FactorReport main_diagram_check(const Surjection& s, const Decomposition& d, int N, int kmin, int kmax);

DiskFun random_disk_fun(PointSetPtr ps, std::mt19937& rng, int maxdeg, int maxden);

}  // namespace fdisk
