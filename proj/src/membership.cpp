#include "fzp/membership.hpp"

#include <string>

namespace fzp {

void MembershipBank::validate() const {
    if (!(r_max > 0.0)) throw ConfigError("r_max must be positive, got " + std::to_string(r_max));
    if (!(0.0 < c && c < d)) throw ConfigError("small shoulder needs 0 < c < d");
    if (!(a < m && m < b)) throw ConfigError("medium triangle needs a < m < b");
    if (!(r < q)) throw ConfigError("large shoulder needs r < q");
}

bool MembershipBank::covers_universe(double step) const {
    for (double x = 0.0; x <= r_max; x += step) {
        const double best = std::max({mu_small(x, *this), mu_medium(x, *this), mu_large(x, *this)});
        if (!(best > 0.0)) return false;
    }
    return true;
}

MembershipBank default_bank(double r_max) {
    if (!(r_max > 0.0)) throw ConfigError("r_max must be positive, got " + std::to_string(r_max));
    MembershipBank bank;
    bank.r_max = r_max;
    bank.d = r_max / 2.0;
    bank.c = r_max / 6.0;
    bank.a = r_max / 4.0;
    bank.m = r_max / 2.0;
    bank.b = 3.0 * r_max / 4.0;
    bank.r = r_max / 2.0;
    bank.q = 3.0 * r_max / 4.0;
    bank.validate();
    return bank;
}

} // namespace fzp
