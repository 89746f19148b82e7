#include "quasifree/tolerances.hpp"

namespace qf::tol {

namespace {
double g_scale = 1.0;
}

double scale() { return g_scale; }
void set_scale(double s) { g_scale = s > 0.0 ? s : 1.0; }

}  // namespace qf::tol
