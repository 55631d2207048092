#include "satqkd/constants.hpp"

#include <cmath>

#include "satqkd/error.hpp"

namespace satqkd {

double loss_db(double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw DomainError("power fraction must lie in (0, 1], got " + std::to_string(fraction));
    return -10.0 * std::log10(fraction);
}

}  // namespace satqkd
