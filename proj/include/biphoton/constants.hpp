#ifndef BIPHOTON_CONSTANTS_HPP
#define BIPHOTON_CONSTANTS_HPP

namespace biphoton {

// CODATA Boltzmann constant, J/K; fixed by definition, not configurable
inline constexpr double k_boltzmann = 1.380649e-23;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.7724538509055160273;
inline constexpr double two_over_sqrt_pi = 1.1283791670955125739;

}

#endif
