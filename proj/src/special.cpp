#include "gns/special.hpp"

#include <cmath>
#include <stdexcept>

namespace gns {

double log_gamma(double x) {
    // 14-coefficient Lanczos series, g = 5.2421875.
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,
        14.1360979747417471,     -0.491913816097620199,
        0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3,
        -0.210264441724104883e-3, 0.217439618115212643e-3,
        -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double beta_fn(double x, double y) {
    return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

}  // namespace gns
