#pragma once

// Information functionals of the composed joint p(x,y1,y2) p(a,b|x), written
// as signed sums of joint entropies over subsets of {X, Y1, Y2, A, B}.

#include <vector>

#include "crrd/channel.hpp"
#include "crrd/prob_core.hpp"

namespace crrd::rd {

enum AxisBit : unsigned { kX = 1u, kY1 = 2u, kY2 = 4u, kA = 8u, kB = 16u };

struct EntropyTerm {
    unsigned mask = 0;
    double coef = 0.0;
};

class EntropyCombination {
public:
    EntropyCombination& add_entropy(unsigned mask, double coef = 1.0);
    /// coef * I(a; b | c) = coef * (H(ac) + H(bc) - H(abc) - H(c)).
    EntropyCombination& add_cmi(unsigned a, unsigned b, unsigned c = 0, double coef = 1.0);

    EntropyCombination operator+(const EntropyCombination& other) const;
    EntropyCombination scaled(double s) const;

    /// Terms merged by mask; zero coefficients dropped. Sorted by mask.
    std::vector<EntropyTerm> terms() const;

    /// Evaluated on a five-axis joint ordered (X, Y1, Y2, A, B).
    double value(const prob::FinitePmf& joint) const;
    double value(const prob::JointSource& source, const TestChannel& ch) const;

    /// Partial derivatives with respect to cond(x, a, b), flattened like
    /// TestChannel::values(). log2 of an empty cell is floored at 1e-300.
    std::vector<double> gradient(const prob::JointSource& source, const TestChannel& ch) const;

private:
    std::vector<EntropyTerm> raw_;
};

namespace functional {
EntropyCombination hb_cr();             // I(X;A|Y1) + I(X;B|Y2 A)
EntropyCombination hb_cr_alt();         // I(X;AB|Y2) + I(A;Y2|Y1)
EntropyCombination both_given_y1();     // I(X;AB|Y1)
EntropyCombination both_given_y2();     // I(X;AB|Y2)
EntropyCombination second_given_y2();   // I(X;B|Y2)
EntropyCombination coop_sum();          // I(X;B|Y2) + I(X;A|Y1 B)
} // namespace functional

/// I(X;A|Y1) + I(X;B|Y2 A) from conditional_mutual_information.
double eval_hb_cr_objective(const prob::JointSource& source, const TestChannel& ch);

/// I(X;AB|Y2) + I(A;Y2|Y1). Throws std::invalid_argument unless X - Y2 - Y1.
double eval_hb_cr_alt_objective(const prob::JointSource& source, const TestChannel& ch);

struct ExpectedDistortions {
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Throws std::invalid_argument if the channel puts mass on a forbidden pair
/// or the shapes disagree.
ExpectedDistortions eval_distortions(const prob::JointSource& source, const TestChannel& ch,
                                     const prob::DistortionMetric& m1, const prob::DistortionMetric& m2);

} // namespace crrd::rd
