// include/chainlab/schonhage_constant.hpp: rigorous enclosure of Schonhage's constant C_s.
//
//   C_s = 2/3 + (2/3) log2 3 - 1/ln 2 - log2 ln(4/3) + sum_{k>=0} log2(1 + 2^(1 - 6*2^k))
//
// Every operation is done twice in MPFR, once rounded down and once rounded up,
// with subtracted terms taking the opposite direction. The series is cut after
// K terms; since log2(1 + x) <= x / ln 2 and consecutive terms shrink by at
// least half, the tail is below 2 * 2^(1 - 6*2^(K+1)) / ln 2.
//
// Requires linking against MPFR and GMP.

#pragma once

#include <mpfr.h>

#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>

namespace chainlab {

struct CsEnclosure {
    unsigned precision = 0;
    unsigned series_terms = 0;
    /// Endpoints as decimal text, rounded outward.
    std::string lower;
    std::string upper;
    double lower_approx = 0;
    double upper_approx = 0;
    double width = 0;
    /// upper - lower <= 2^(2 - precision)
    bool width_ok = false;
    /// 0 <= lower and upper <= 2.13
    bool within_bound = false;
};

namespace detail {

/// RAII wrapper around mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

inline std::string mpfr_text(mpfr_srcptr x, mpfr_rnd_t rnd, int digits = 30) {
    mpfr_exp_t exp = 0;
    char* raw = mpfr_get_str(nullptr, &exp, 10, digits, x, rnd);
    if (raw == nullptr) {
        throw std::runtime_error("mpfr_get_str failed");
    }
    std::string mant(raw);
    mpfr_free_str(raw);
    std::string sign;
    if (!mant.empty() && mant[0] == '-') {
        sign = "-";
        mant.erase(0, 1);
    }
    if (exp <= 0) {
        return sign + "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
    }
    if (static_cast<std::size_t>(exp) >= mant.size()) {
        return sign + mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
    }
    return sign + mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
}

}  // namespace detail

inline CsEnclosure compute_cs(unsigned precision) {
    if (precision < 16) {
        throw std::invalid_argument("compute_cs: precision must be at least 16 bits");
    }
    using detail::Mpfr;
    const mpfr_prec_t work = static_cast<mpfr_prec_t>(precision) + 64;

    // bounds[0] accumulates the lower endpoint, bounds[1] the upper one
    Mpfr lo(work);
    Mpfr hi(work);
    Mpfr a(work);
    Mpfr b(work);

    // 2/3
    mpfr_set_ui(lo.get(), 2, MPFR_RNDN);
    mpfr_div_ui(lo.get(), lo.get(), 3, MPFR_RNDD);
    mpfr_set_ui(hi.get(), 2, MPFR_RNDN);
    mpfr_div_ui(hi.get(), hi.get(), 3, MPFR_RNDU);

    // + (2/3) log2 3
    mpfr_set_ui(a.get(), 3, MPFR_RNDN);
    mpfr_log2(a.get(), a.get(), MPFR_RNDD);
    mpfr_mul_ui(a.get(), a.get(), 2, MPFR_RNDD);
    mpfr_div_ui(a.get(), a.get(), 3, MPFR_RNDD);
    mpfr_add(lo.get(), lo.get(), a.get(), MPFR_RNDD);
    mpfr_set_ui(b.get(), 3, MPFR_RNDN);
    mpfr_log2(b.get(), b.get(), MPFR_RNDU);
    mpfr_mul_ui(b.get(), b.get(), 2, MPFR_RNDU);
    mpfr_div_ui(b.get(), b.get(), 3, MPFR_RNDU);
    mpfr_add(hi.get(), hi.get(), b.get(), MPFR_RNDU);

    // - 1 / ln 2: subtract an upper bound from lo, a lower bound from hi
    mpfr_const_log2(a.get(), MPFR_RNDD);
    mpfr_ui_div(a.get(), 1, a.get(), MPFR_RNDU);
    mpfr_sub(lo.get(), lo.get(), a.get(), MPFR_RNDD);
    mpfr_const_log2(b.get(), MPFR_RNDU);
    mpfr_ui_div(b.get(), 1, b.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), hi.get(), b.get(), MPFR_RNDU);

    // - log2 ln(4/3); ln(4/3) < 1 so this term is positive
    mpfr_set_ui(a.get(), 4, MPFR_RNDN);
    mpfr_div_ui(a.get(), a.get(), 3, MPFR_RNDU);
    mpfr_log(a.get(), a.get(), MPFR_RNDU);
    mpfr_log2(a.get(), a.get(), MPFR_RNDU);
    mpfr_sub(lo.get(), lo.get(), a.get(), MPFR_RNDD);
    mpfr_set_ui(b.get(), 4, MPFR_RNDN);
    mpfr_div_ui(b.get(), b.get(), 3, MPFR_RNDD);
    mpfr_log(b.get(), b.get(), MPFR_RNDD);
    mpfr_log2(b.get(), b.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), hi.get(), b.get(), MPFR_RNDU);

    // series: stop once the next exponent 6*2^k - 1 exceeds the working precision
    unsigned terms = 0;
    for (unsigned k = 0;; ++k) {
        const unsigned long e = 6UL * (1UL << k) - 1;
        if (e > static_cast<unsigned long>(work) + 8) {
            break;
        }
        // log2(1 + 2^-e); 1 + 2^-e is exact when e < work
        mpfr_set_ui_2exp(a.get(), 1, -static_cast<mpfr_exp_t>(e), MPFR_RNDN);
        mpfr_add_ui(a.get(), a.get(), 1, MPFR_RNDD);
        mpfr_log2(a.get(), a.get(), MPFR_RNDD);
        mpfr_add(lo.get(), lo.get(), a.get(), MPFR_RNDD);
        mpfr_set_ui_2exp(b.get(), 1, -static_cast<mpfr_exp_t>(e), MPFR_RNDN);
        mpfr_add_ui(b.get(), b.get(), 1, MPFR_RNDU);
        mpfr_log2(b.get(), b.get(), MPFR_RNDU);
        mpfr_add(hi.get(), hi.get(), b.get(), MPFR_RNDU);
        ++terms;
    }
    // tail bound 2^(2 - 6*2^terms) / ln 2, added to the upper endpoint only
    {
        const unsigned long e = 6UL * (1UL << terms) - 2;
        mpfr_const_log2(a.get(), MPFR_RNDD);
        mpfr_set_ui_2exp(b.get(), 1, -static_cast<mpfr_exp_t>(e), MPFR_RNDU);
        mpfr_div(b.get(), b.get(), a.get(), MPFR_RNDU);
        mpfr_add(hi.get(), hi.get(), b.get(), MPFR_RNDU);
    }

    CsEnclosure out;
    out.precision = precision;
    out.series_terms = terms;
    out.lower = detail::mpfr_text(lo.get(), MPFR_RNDD);
    out.upper = detail::mpfr_text(hi.get(), MPFR_RNDU);
    out.lower_approx = mpfr_get_d(lo.get(), MPFR_RNDD);
    out.upper_approx = mpfr_get_d(hi.get(), MPFR_RNDU);

    mpfr_sub(a.get(), hi.get(), lo.get(), MPFR_RNDU);
    out.width = mpfr_get_d(a.get(), MPFR_RNDU);
    mpfr_set_ui_2exp(b.get(), 1, 2 - static_cast<mpfr_exp_t>(precision), MPFR_RNDN);
    out.width_ok = mpfr_lessequal_p(a.get(), b.get()) != 0;

    // upper <= 2.13 exactly: 100 * upper (rounded up) <= 213
    mpfr_mul_ui(a.get(), hi.get(), 100, MPFR_RNDU);
    out.within_bound = mpfr_sgn(lo.get()) >= 0 && mpfr_cmp_ui(a.get(), 213) <= 0;
    return out;
}

}  // namespace chainlab
