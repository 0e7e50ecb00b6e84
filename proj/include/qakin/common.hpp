#pragma once

#include <functional>
#include <stdexcept>
#include <string>

// Reduced units used throughout: hbar = J = 1, beta = 2J/k_BT.
// Scaled one-fermion energies eps_k are in units of 2J; physical energy
// E_k = 2 eps_k.  All rates and times (transition rates, recombination
// rate, annealing rate v, trajectory times) are in units of J/hbar.

namespace qakin {

class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Accuracy warnings are advisory: computations proceed, the message goes to
// the installed handler (stderr by default).  Tests install a capturing
// handler to assert that a warning fired.
using warning_handler = std::function<void(const std::string&)>;
void set_warning_handler(warning_handler handler);
void warn(const std::string& message);

// Validity thresholds for the asymptotic formulas, kept in one place.
namespace thresholds {
inline constexpr double weak_coupling_alpha = 0.2;   // warn when alpha >= this
inline constexpr double asym_beta_gap = 3.0;         // warn when beta|1-g| < this
inline constexpr double renorm_w = 0.1;              // warn when polaron W exceeds this
inline constexpr double mu_large = 1e2;              // warn when mu below this
inline constexpr double log_law_exp = 1e2;           // warn when e^{beta(g0-g)} < this
}  // namespace thresholds

}  // namespace qakin
