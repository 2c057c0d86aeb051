#pragma once

#include <complex>
#include <string>
#include <vector>

#include "stokeskit/cmatrix.hpp"
#include "stokeskit/connection.hpp"
#include "stokeskit/stokesdata.hpp"

namespace stokeskit {

struct IntegrationConfig {
    double tol = 1e-10;      // relative error target per step
    double tol_abs = 1e-12;  // absolute floor
    double separation = 1e8; // exp(Re dphi) reached at the seeding radius
    double rho_seed = 0.0;   // 0 = derive from separation
    double rho_match = 0.0;  // 0 = 10 * rho_seed, capped inside the disc
    int n_asym = 8;          // truncation order of the formal series
    double disc_radius = 2.0;
    double min_step = 1e-13; // step-underflow guard (fraction of a segment)
    double max_step = 0.25;  // step cap (fraction of a segment)

    void resolve(const FormalType& formal); // fill the derived radii
};

// Matrix whose columns are the truncated formal solutions of C at rho e^{i theta}
// (theta a real lift, never reduced). Resonant recursions are reported through
// notes and the column falls back to the bare leading term.
CMatrix asymptotic_seed(const ConnectionSpec& C, const FormalType& formal, double theta,
                        double rho, int n_terms, std::vector<std::string>* notes = nullptr);

// Transport of y0 along the polyline (straight segments, all avoiding 0) by an
// embedded Dormand-Prince pair; deterministic for fixed cfg.
CMatrix integrate(const ConnectionSpec& C, const std::vector<std::complex<double>>& path,
                  const CMatrix& y0, const IntegrationConfig& cfg);

struct FundamentalMatrix {
    int sector = 1;
    double rho = 0.0;
    double theta = 0.0;
    CMatrix matrix;
};

struct StokesComputation {
    StokesStructure structure;           // cleaned and normalized when valid
    std::vector<CMatrix> raw;            // transitions before cleaning
    std::vector<double> residuals;       // max off-shape magnitude per raw matrix
    std::vector<FundamentalMatrix> seeds; // per-sector seed frames
    std::vector<Violation> violations;
    std::vector<std::string> notes;
};

// Seeds every sector at its bisector, transports along the matching circle into
// the overlaps, and extracts A_i = Y_{i+1}^{-1} Y_i at the overlap midpoints.
StokesComputation stokes_matrices(const ConnectionSpec& C, IntegrationConfig cfg = {});

// Transport of a frame once counterclockwise around the circle of radius rho;
// returns the conjugacy-class representative Y(2 pi) Y(0)^{-1}.
CMatrix numeric_monodromy(const ConnectionSpec& C, double rho, const IntegrationConfig& cfg = {});

} // namespace stokeskit
