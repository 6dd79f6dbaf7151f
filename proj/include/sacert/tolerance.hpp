#ifndef SACERT_TOLERANCE_HPP
#define SACERT_TOLERANCE_HPP

#include <cmath>
#include <cstdlib>

namespace sacert {

// Default tolerances: rel 1e-9 / abs 1e-12, overridable via SPIDERCERT_TOL
// (scales both) or per call site.
struct Tol {
    double rel = 1e-9;
    double abs = 1e-12;

    static Tol defaults() {
        Tol t;
        if (const char* env = std::getenv("SPIDERCERT_TOL")) {
            double s = std::atof(env);
            if (s > 0) {
                t.rel = s;
                t.abs = s * 1e-3;
            }
        }
        return t;
    }

    bool close(double a, double b) const {
        double diff = std::fabs(a - b);
        double scale = std::fmax(std::fabs(a), std::fabs(b));
        return diff <= abs || diff <= rel * scale;
    }
};

}  // namespace sacert

#endif
