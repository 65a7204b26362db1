#pragma once

#include <stdexcept>
#include <string>

namespace mpf {

/// Path parameterization is not regular: |dp/du| fell below the minimum
/// usable speed somewhere inside the evaluated range.
class RegularityViolation : public std::runtime_error {
  public:
    explicit RegularityViolation(const std::string& what) : std::runtime_error(what) {}
};

/// The feasibility condition relating target motion to vehicle airspeed
/// failed: the commanded steady-state heading would leave the unit sphere.
class AssumptionViolated : public std::runtime_error {
  public:
    AssumptionViolated(const std::string& what, long step, double t)
        : std::runtime_error(what), step(step), time(t) {}
    explicit AssumptionViolated(const std::string& what) : std::runtime_error(what) {}

    long step = -1;    // simulation step index, -1 outside a run
    double time = 0.0; // simulation time [s]
};

} // namespace mpf
