#pragma once

#include <cmath>
#include <stdexcept>

namespace ocnreg {

/**
 * @brief Prismatic channel reach with a trapezoidal cross section.
 *
 * Levels are measured from the minimum service level, so a level of 0
 * is the lowest the reach is allowed to run. wall_angle is the bank
 * inclination from vertical, in radians; 0 gives a rectangular section.
 *
 * Volume as a function of level is quadratic,
 *     V(h) = length * bed_width * h + length * tan(wall_angle) * h^2,
 * and the inverse is evaluated through the completed square so the
 * round trip level -> volume -> level is exact apart from rounding.
 */
struct ChannelShape {
    double length = 0.0;
    double bed_width = 0.0;
    double wall_angle = 0.0;
    double level_span = 0.0;  // distance from minimum to maximum service level

    void validate() const {
        if (!(length > 0.0)) throw std::invalid_argument("channel length must be positive");
        if (!(wall_angle >= 0.0) || !(wall_angle < 1.5707963267948966))
            throw std::invalid_argument("wall angle must lie in [0, pi/2)");
        if (wall_angle == 0.0) {
            if (!(bed_width > 0.0))
                throw std::invalid_argument("rectangular channel needs a positive bed width");
        } else if (!(bed_width >= 0.0)) {
            throw std::invalid_argument("bed width must be nonnegative");
        }
        if (!(level_span > 0.0)) throw std::invalid_argument("level span must be positive");
        if (bed_width == 0.0 && wall_angle == 0.0)
            throw std::invalid_argument("degenerate cross section");
    }

    double volume_at_level(double h) const {
        return length * bed_width * h + length * std::tan(wall_angle) * h * h;
    }

    double level_at_volume(double v) const {
        const double t = std::tan(wall_angle);
        if (t == 0.0) return v / (length * bed_width);
        // V = L t (h + c)^2 - L t c^2 with c = b / (2 t)
        const double c = bed_width / (2.0 * t);
        const double s = c * c + v / (length * t);
        if (s < 0.0) throw std::invalid_argument("volume below empty channel");
        return std::sqrt(s) - c;
    }

    // free-surface area at a given level; the derivative dV/dh
    double surface_area(double h) const {
        return length * (bed_width + 2.0 * std::tan(wall_angle) * h);
    }

    // level change produced by moving a volume at the given level
    double level_rate_from_flow(double volume_per_step, double h) const {
        const double a = surface_area(h);
        if (!(a > 0.0)) throw std::invalid_argument("zero surface area");
        return volume_per_step / a;
    }
};

}  // namespace ocnreg
