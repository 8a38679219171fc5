#pragma once

#include <cstddef>
#include <vector>

#include "rlauction/instance.hpp"

namespace rlauction {

/// Full probability tables of a direct mechanism: for every buyer i, payment
/// index j and value profile p, win(i,j,p) is the probability that buyer i
/// gets the item and pays z_j; lose(i,j,p) that she does not get it and pays
/// z_j.  For each (i,p) the outcome distribution sums to 1; per profile the
/// total win mass is at most 1.
struct DirectMechanism {
    int buyers = 1;
    std::size_t num_values = 0;    // K
    std::size_t num_payments = 0;  // M
    std::vector<double> y0;        // lose tables, buyers*M*K^n entries
    std::vector<double> y1;        // win tables, same shape

    std::size_t profiles = 0;  // K^buyers

    static DirectMechanism zeros(const Instance& inst);

    std::size_t profile_count() const { return profiles; }
    std::size_t index(int buyer, std::size_t payment, std::size_t profile) const {
        return (static_cast<std::size_t>(buyer) * num_payments + payment) * profiles +
               profile;
    }
    double win(int buyer, std::size_t payment, std::size_t profile) const {
        return y1[index(buyer, payment, profile)];
    }
    double lose(int buyer, std::size_t payment, std::size_t profile) const {
        return y0[index(buyer, payment, profile)];
    }
    double& win(int buyer, std::size_t payment, std::size_t profile) {
        return y1[index(buyer, payment, profile)];
    }
    double& lose(int buyer, std::size_t payment, std::size_t profile) {
        return y0[index(buyer, payment, profile)];
    }
};

/// Interim view of a direct mechanism: per buyer i and own value k, the
/// expected win/lose-and-pay-z_j probabilities over opponents' values, the
/// interim allocation x_i(k), and the conditional expected payments given a
/// win (p_i(k)) and given a loss (q_i(k)).
struct InterimMechanism {
    int buyers = 1;
    std::size_t num_values = 0;
    std::size_t num_payments = 0;
    std::vector<double> y0;        // [buyer][k][j]
    std::vector<double> y1;        // [buyer][k][j]
    std::vector<double> alloc;     // x_i(k), [buyer][k]
    std::vector<double> pay_win;   // p_i(k); 0 when x_i(k) == 0
    std::vector<double> pay_lose;  // q_i(k); 0 when x_i(k) == 1

    std::size_t index(int buyer, std::size_t k, std::size_t j) const {
        return (static_cast<std::size_t>(buyer) * num_values + k) * num_payments + j;
    }
    std::size_t kindex(int buyer, std::size_t k) const {
        return static_cast<std::size_t>(buyer) * num_values + k;
    }
};

InterimMechanism interim_of(const DirectMechanism& d, const Instance& inst);

/// Interim expected utility for buyer i of value v_k reporting v_report.
double interim_utility(const InterimMechanism& m, const Instance& inst, int buyer,
                       std::size_t k_true, std::size_t k_report);

}  // namespace rlauction
