#pragma once

#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "stokeskit/factor.hpp"
#include "stokeskit/laurent.hpp"

namespace stokeskit {

// P = sum_i a_i(x) D^i with Laurent-polynomial coefficients; zero coefficients
// are never stored.
class DifferentialOperator {
public:
    DifferentialOperator() = default;
    explicit DifferentialOperator(std::map<int, LaurentPoly> coeffs);

    // Grammar: sums of normal-ordered monomials  coeff * x^k * D^j,
    // e.g. "x^3*D + 1", "x^5*D^2 - 1", "(2+1*i)*x^-2*D".
    static DifferentialOperator parse(const std::string& text);

    const std::map<int, LaurentPoly>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int order() const;

    LaurentPoly coefficient(int i) const;

    // Substitution x = y^m; D_x becomes (1/m) y^(1-m) D_y.
    DifferentialOperator pullback(long long m) const;

    // Conjugation by e^psi for Laurent psi: D -> D + psi'.
    DifferentialOperator twist(const LaurentPoly& psi) const;

    // Conjugation with the log-derivative g given directly: D -> D + g
    // (g may carry a residue term that psi itself cannot).
    DifferentialOperator twist_log(const LaurentPoly& g) const;

    std::string render() const;

private:
    void prune();

    std::map<int, LaurentPoly> coeffs_;
};

// First-order system du = A(x) u with Laurent entries, size <= 2.
struct SystemSpec {
    std::vector<std::vector<LaurentPoly>> entries; // square, row-major

    int size() const { return static_cast<int>(entries.size()); }
    bool is_diagonal() const;
    SystemSpec negated() const; // the dual connection's matrix
};

// One exponential-times-regular piece of a formal decomposition.
struct FormalItem {
    ExponentialFactor factor;                     // pole part (zero factor = regular)
    int rank = 1;
    std::vector<std::complex<double>> exponents;  // length == rank, Re in [0,1)
    std::vector<QComplex> exact_exponents;        // parallel to exponents when the
                                                  // indicial roots stayed rational
};

struct FormalType {
    long long ramification = 1;
    std::vector<FormalItem> items;

    int total_rank() const;
};

using ConnectionSpec = std::variant<DifferentialOperator, SystemSpec, FormalType>;

int rank_of(const ConnectionSpec& spec);

} // namespace stokeskit
