#include "contrastfs/rng.hpp"

#include <cmath>

namespace contrastfs {

double Rng::normal() noexcept
{
    if (m_has_spare) {
        m_has_spare = false;
        return m_spare;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    m_spare = v * scale;
    m_has_spare = true;
    return u * scale;
}

}  // namespace contrastfs
