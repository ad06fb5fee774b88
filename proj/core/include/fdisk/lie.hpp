#pragma once

#include "fdisk/poly.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace fdisk {

class LieError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense coordinates on the Lie basis.
using GVec = std::vector<Q>;
using QMatrix = std::vector<std::vector<Q>>;

// Finite simple Lie algebra given by tables, validated on load.
class LieData {
public:
    static const LieData& get(const std::string& name);  // "sl2" or "sl3"
    static LieData from_json(const nlohmann::json& j);
    static std::vector<std::string> shipped();

    const std::string& name() const { return name_; }
    const std::string& langlands_dual() const { return dual_name_; }
    int dim() const { return static_cast<int>(labels_.size()); }
    int rank() const { return rank_; }
    int dual_coxeter() const { return hv_; }
    const std::string& label(int a) const { return labels_.at(a); }
    int index(const std::string& label) const;

    // [x_a, x_b] as sparse (index, coefficient) pairs.
    const std::vector<std::pair<int, Q>>& bracket(int a, int b) const { return table_[a][b]; }
    GVec bracket(const GVec& x, const GVec& y) const;
    // Normalized invariant form (long roots have square length 2).
    const Q& form(int a, int b) const { return kappa0_[a][b]; }
    Q form(const GVec& x, const GVec& y) const;
    const Q& killing(int a, int b) const { return killing_[a][b]; }
    // Inverse matrix of the normalized form; J^a = sum_b form_inverse(a, b) x_b.
    const Q& form_inverse(int a, int b) const { return kappa0_inv_[a][b]; }

    // Levels are multiples of the normalized form.
    Q killing_level() const { return Q(2 * hv_); }
    Q critical_level() const { return Q(-hv_); }

    const QMatrix& matrix(int a) const { return matrices_.at(a); }
    int matrix_size() const { return msize_; }
    QMatrix to_matrix(const GVec& x) const;
    GVec from_matrix(const QMatrix& m) const;

    GVec basis_vector(int a) const;
    const std::vector<int>& simple_e() const { return simple_e_; }
    const std::vector<int>& simple_f() const { return simple_f_; }
    const std::vector<int>& simple_h() const { return simple_h_; }
    const GVec& p_minus() const { return p_minus_; }
    const GVec& two_rho() const { return two_rho_; }
    const GVec& p_plus() const { return p_plus_; }
    // Principal grading: [rho, x_a] = degree(a) x_a.
    int degree(int a) const { return degree_[a]; }
    const std::vector<GVec>& vcan() const { return vcan_; }
    const std::vector<int>& vcan_degrees() const { return vcan_deg_; }

    nlohmann::json to_json() const;

private:
    void validate();

    std::string name_, dual_name_;
    int rank_ = 0, hv_ = 0, msize_ = 0;
    std::vector<std::string> labels_;
    std::vector<std::vector<std::vector<std::pair<int, Q>>>> table_;
    QMatrix kappa0_, kappa0_inv_, killing_;
    std::vector<QMatrix> matrices_;
    std::vector<int> simple_e_, simple_f_, simple_h_, degree_;
    GVec p_minus_, two_rho_, p_plus_;
    std::vector<GVec> vcan_;
    std::vector<int> vcan_deg_;
    nlohmann::json source_;
};

// Small dense linear algebra over Q.
QMatrix mat_mul(const QMatrix& a, const QMatrix& b);
QMatrix mat_inverse(const QMatrix& a);  // throws LieError when singular
int mat_rank(QMatrix a);

}  // namespace fdisk
