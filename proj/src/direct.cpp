#include "rlauction/direct.hpp"

#include <stdexcept>

namespace rlauction {

DirectMechanism DirectMechanism::zeros(const Instance& inst) {
    DirectMechanism d;
    d.buyers = inst.buyers();
    d.num_values = inst.num_values();
    d.num_payments = inst.num_payments();
    d.profiles = inst.profile_count();
    const std::size_t total =
        static_cast<std::size_t>(d.buyers) * d.num_payments * d.profiles;
    d.y0.assign(total, 0.0);
    d.y1.assign(total, 0.0);
    return d;
}

InterimMechanism interim_of(const DirectMechanism& d, const Instance& inst) {
    if (d.buyers != inst.buyers() || d.num_values != inst.num_values() ||
        d.num_payments != inst.num_payments()) {
        throw std::invalid_argument("interim_of: mechanism/instance shape mismatch");
    }
    InterimMechanism m;
    m.buyers = d.buyers;
    m.num_values = d.num_values;
    m.num_payments = d.num_payments;
    const std::size_t per_buyer = d.num_values * d.num_payments;
    m.y0.assign(static_cast<std::size_t>(d.buyers) * per_buyer, 0.0);
    m.y1.assign(static_cast<std::size_t>(d.buyers) * per_buyer, 0.0);
    m.alloc.assign(static_cast<std::size_t>(d.buyers) * d.num_values, 0.0);
    m.pay_win.assign(m.alloc.size(), 0.0);
    m.pay_lose.assign(m.alloc.size(), 0.0);

    ProfileSpace space(d.num_values, d.buyers);
    std::vector<std::size_t> digits(static_cast<std::size_t>(d.buyers));
    const auto& f = inst.pmf();
    for (std::size_t p = 0; p < space.count(); ++p) {
        space.decode(p, digits);
        const double fp = space.pmf(digits, f);
        for (int i = 0; i < d.buyers; ++i) {
            const double f_others = fp / f[digits[i]];
            for (std::size_t j = 0; j < d.num_payments; ++j) {
                m.y0[m.index(i, digits[i], j)] += f_others * d.lose(i, j, p);
                m.y1[m.index(i, digits[i], j)] += f_others * d.win(i, j, p);
            }
        }
    }

    const auto& z = inst.payments();
    for (int i = 0; i < d.buyers; ++i) {
        for (std::size_t k = 0; k < d.num_values; ++k) {
            double x = 0.0, win_pay = 0.0, lose_pay = 0.0;
            for (std::size_t j = 0; j < d.num_payments; ++j) {
                x += m.y1[m.index(i, k, j)];
                win_pay += z[j] * m.y1[m.index(i, k, j)];
                lose_pay += z[j] * m.y0[m.index(i, k, j)];
            }
            m.alloc[m.kindex(i, k)] = x;
            m.pay_win[m.kindex(i, k)] = x > 0.0 ? win_pay / x : 0.0;
            m.pay_lose[m.kindex(i, k)] = x < 1.0 ? lose_pay / (1.0 - x) : 0.0;
        }
    }
    return m;
}

double interim_utility(const InterimMechanism& m, const Instance& inst, int buyer,
                       std::size_t k_true, std::size_t k_report) {
    const auto& u = inst.utility();
    const auto& z = inst.payments();
    const double v = inst.values()[k_true];
    double total = 0.0;
    for (std::size_t j = 0; j < m.num_payments; ++j) {
        total += m.y1[m.index(buyer, k_report, j)] * eval_utility(u, v - z[j]);
        total += m.y0[m.index(buyer, k_report, j)] * eval_utility(u, -z[j]);
    }
    return total;
}

}  // namespace rlauction
