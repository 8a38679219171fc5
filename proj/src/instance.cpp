#include "rlauction/instance.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rlauction {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("Instance: " + what);
}

void require_strictly_increasing(const std::vector<double>& xs, const char* name) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) fail(std::string(name) + " contains a non-finite entry");
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            std::ostringstream msg;
            msg << name << " must be strictly increasing (entries " << i - 1 << ", " << i
                << ")";
            fail(msg.str());
        }
    }
}

}  // namespace

Instance::Instance(std::vector<double> values, std::vector<double> pmf,
                   std::vector<double> payments, int buyers, Utility utility)
    : values_(std::move(values)),
      pmf_(std::move(pmf)),
      payments_(std::move(payments)),
      buyers_(buyers),
      utility_(utility) {
    if (values_.empty()) fail("values must be non-empty");
    if (pmf_.size() != values_.size()) fail("pmf length must match values");
    if (payments_.empty()) fail("payments must be non-empty");
    if (buyers_ < 1) fail("n must be at least 1");

    require_strictly_increasing(values_, "values");
    require_strictly_increasing(payments_, "payments");
    if (values_.front() != 0.0) fail("values must start at 0");
    if (payments_.front() != 0.0) fail("payments must start at 0");
    if (!(payments_.back() > values_.back())) {
        fail("the top payment z_M must exceed the top value");
    }

    double total = 0.0;
    for (std::size_t k = 0; k < pmf_.size(); ++k) {
        if (!(pmf_[k] > 0.0) || !std::isfinite(pmf_[k])) {
            std::ostringstream msg;
            msg << "pmf[" << k << "] must be positive";
            fail(msg.str());
        }
        total += pmf_[k];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "pmf must sum to 1 (got " << total << ")";
        fail(msg.str());
    }

    // L = z_M is allowed: the utility is then flat only at x = -z_M itself,
    // which no strict comparison in the mechanism computations touches.
    if (utility_.kind == UtilityKind::Quadratic && !(utility_.shift >= payments_.back())) {
        fail("quadratic utility requires L >= z_M");
    }

    tails_.assign(values_.size() + 1, 0.0);
    for (std::size_t k = values_.size(); k-- > 0;) {
        tails_[k] = tails_[k + 1] + pmf_[k];
    }
}

double Instance::prob_at_least(double v) const {
    double total = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] >= v) total += pmf_[k];
    }
    return total;
}

std::size_t Instance::value_index(double v) const {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (values_[k] == v) return k;
    }
    throw std::domain_error("Instance: value is not on the grid");
}

std::size_t Instance::profile_count() const {
    return ProfileSpace(values_.size(), buyers_).count();
}

ProfileSpace::ProfileSpace(std::size_t num_values, int buyers)
    : num_values_(num_values), buyers_(buyers) {
    count_ = 1;
    for (int i = 0; i < buyers_; ++i) {
        if (count_ > std::numeric_limits<std::size_t>::max() / num_values_) {
            throw std::overflow_error("ProfileSpace: K^n overflows");
        }
        count_ *= num_values_;
    }
}

void ProfileSpace::decode(std::size_t id, std::span<std::size_t> out) const {
    for (int i = 0; i < buyers_; ++i) {
        out[i] = id % num_values_;
        id /= num_values_;
    }
}

std::size_t ProfileSpace::encode(std::span<const std::size_t> digits) const {
    std::size_t id = 0;
    for (int i = buyers_; i-- > 0;) {
        id = id * num_values_ + digits[i];
    }
    return id;
}

double ProfileSpace::pmf(std::span<const std::size_t> digits,
                         std::span<const double> f) const {
    double p = 1.0;
    for (int i = 0; i < buyers_; ++i) p *= f[digits[i]];
    return p;
}

}  // namespace rlauction
