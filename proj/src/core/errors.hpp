#pragma once

#include <stdexcept>
#include <string>

namespace uthresh {

// The Gram matrix of the kernel sections failed the almost-diagonal test:
// either an eigenvalue left (0, 4) or the certified delta reached 1.
class assumption_violated : public std::runtime_error {
public:
    assumption_violated(std::string what, double lambda_min, double lambda_max,
                        double inf_norm_inverse)
        : std::runtime_error(std::move(what)),
          lambda_min(lambda_min),
          lambda_max(lambda_max),
          inf_norm_inverse(inf_norm_inverse) {}

    double lambda_min;
    double lambda_max;
    double inf_norm_inverse;
};

// Normal-equation system too ill-conditioned to solve reliably.
class singular_system : public std::runtime_error {
public:
    singular_system(std::string what, double condition_estimate)
        : std::runtime_error(std::move(what)), condition_estimate(condition_estimate) {}

    double condition_estimate;
};

// Structured configuration or data-file problem; `field` names the offender
// (a config key path, or "file:row" for data files).
class config_error : public std::runtime_error {
public:
    config_error(std::string field, const std::string& what)
        : std::runtime_error("config error [" + field + "]: " + what), field(std::move(field)) {}

    std::string field;
};

class data_error : public std::runtime_error {
public:
    data_error(std::string where, const std::string& what)
        : std::runtime_error("data error [" + where + "]: " + what), where(std::move(where)) {}

    std::string where;
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error("i/o error: " + what) {}
};

}  // namespace uthresh
