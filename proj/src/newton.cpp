#include "stokeskit/newton.hpp"

#include <numeric>

#include "stokeskit/errors.hpp"

namespace stokeskit {

Rational NewtonPolygon::max_slope() const {
    Rational m(0);
    for (const auto& s : slopes)
        if (m < s.slope) m = s.slope;
    return m;
}

NewtonPolygon newton_polygon(const DifferentialOperator& op) {
    if (op.is_zero()) throw math_error("Newton polygon of the zero operator");

    std::vector<std::pair<long long, long long>> pts; // (i, v(a_i) - i), i ascending
    for (const auto& [i, a] : op.coeffs()) pts.emplace_back(i, a.valuation() - i);

    // Monotone-chain lower hull (points already sorted by i, all i distinct).
    std::vector<std::pair<long long, long long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // keep only right turns: cross((b-a),(p-a)) <= 0 drops b
            __int128 cross = __int128(b.first - a.first) * (p.second - a.second) -
                             __int128(b.second - a.second) * (p.first - a.first);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }

    NewtonPolygon np;
    for (const auto& [i, h] : hull) np.vertices.emplace_back(Rational(i), Rational(h));

    // Regular length: the largest i whose point attains the hull minimum. Edges of
    // slope <= 0 end there and their solutions are all of moderate growth.
    long long hmin = hull.front().second;
    for (const auto& [i, h] : hull) hmin = std::min(hmin, h);
    long long regular_len = 0;
    for (const auto& [i, h] : hull)
        if (h == hmin) regular_len = std::max(regular_len, i);

    if (regular_len > 0) np.slopes.push_back({Rational(0), Rational(regular_len)});
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        long long di = hull[k + 1].first - hull[k].first;
        long long dh = hull[k + 1].second - hull[k].second;
        Rational slope(dh, di);
        if (slope.sign() > 0) np.slopes.push_back({slope, Rational(di)});
    }
    return np;
}

long long ramification_order(const std::vector<NewtonSlope>& slopes) {
    long long m = 1;
    for (const auto& s : slopes) m = std::lcm(m, s.slope.den());
    return m;
}

} // namespace stokeskit
