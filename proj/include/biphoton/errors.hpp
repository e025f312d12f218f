#ifndef BIPHOTON_ERRORS_HPP
#define BIPHOTON_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace biphoton {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid physical input; message names the offending field
struct validation_error : error {
    std::string field;
    validation_error(std::string field_, const std::string& msg)
        : error("validation: " + field_ + ": " + msg), field(std::move(field_)) {}
};

// config file problems: unreadable file, malformed JSON, unknown keys
struct config_error : error {
    using error::error;
};

// API precondition violated (unnormalized input, oracle grid too large, too few fit points)
struct contract_error : error {
    using error::error;
};

// non-finite argument to a special function
struct domain_error : error {
    using error::error;
};

// numerical failure (normalization, factorization, overflow)
struct numeric_error : error {
    using error::error;
};

// adaptive quadrature failed to converge; carries the last two iterates
struct quadrature_error : numeric_error {
    std::complex<double> last, previous;
    int nodes;
    quadrature_error(const std::string& msg, std::complex<double> last_,
                     std::complex<double> previous_, int nodes_)
        : numeric_error(msg), last(last_), previous(previous_), nodes(nodes_) {}
};

// nonlinear fit failed; carries the final iterate as a trace
struct fit_error : numeric_error {
    double a, beta;
    int iterations;
    fit_error(const std::string& msg, double a_, double beta_, int iterations_)
        : numeric_error(msg), a(a_), beta(beta_), iterations(iterations_) {}
};

}

#endif
