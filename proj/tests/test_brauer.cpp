#include "dp4/brauer.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dp4;

namespace {

// Oracle: the four quotient values at an exact rational point, skipping undefined or zero ones.
std::vector<Rational> quotient_values(const SurfaceParams& s, const RationalPoint& t) {
    std::vector<Rational> out;
    for (auto [num, den] : std::vector<std::pair<Integer, Integer>>{
             {t[0] + s.A * t[1], t[0]}, {t[0] + s.A * t[1], t[1]}, {t[0] + s.B * t[1], t[0]}, {t[0] + s.B * t[1], t[1]}})
        if (num != 0 && den != 0) out.push_back(Rational(num) / Rational(den));
    return out;
}

std::vector<Place> places_for(const SurfaceParams& s, const std::vector<Rational>& qs) {
    std::set<Integer> primes{2};
    for (const auto& p : factor(s.D).primes()) primes.insert(p);
    for (const auto& q : qs)
        for (const Integer& x : {numerator(q), denominator(q)})
            if (abs(x) > 1)
                for (const auto& p : factor(x).primes()) primes.insert(p);
    std::vector<Place> out{Place::real()};
    for (const auto& p : primes) out.push_back(Place{p});
    return out;
}

bool on_surface(const SurfaceParams& s, const RationalPoint& t) {
    return first_equation(s.D, t) == 0 && second_equation(s.D, s.A, s.B, t) == 0;
}

const LocalCertificate& at(const GlobalCertificate& c, const std::string& place) {
    for (const auto& l : c.locals)
        if (l.place.to_string() == place) return l;
    throw std::out_of_range("no local certificate at " + place);
}

} // namespace

TEST(Half, Arithmetic) {
    EXPECT_EQ(Half::half + Half::half, Half::zero);
    EXPECT_EQ(Half::half + Half::zero, Half::half);
    EXPECT_EQ(from_symbol(-1), Half::half);
    EXPECT_EQ(parse_half("1/2"), Half::half);
    EXPECT_THROW(parse_half("1"), std::invalid_argument);
    EXPECT_EQ(parse_quotient(to_string(Quotient::b_over_t1)), Quotient::b_over_t1);
}

TEST(EvaluateAtPoint, Examples) {
    SurfaceParams s{17, 9, 11};
    LocalPoint pt{{Integer(1), Integer(1), Integer(1), Integer(0), Integer(0)}, 1};
    auto w = evaluate_at_point(pt, s, 17);
    EXPECT_EQ(w.quotient, Quotient::a_over_t0);
    EXPECT_EQ(w.q, 10);
    EXPECT_EQ(w.symbol, -1);  // 10 is not a square mod 17
    EXPECT_EQ(w.value, Half::half);

    // (T0 + A T1) vanishes mod 17 at t0 = 8, t1 = 1, so the B quotient is used.
    LocalPoint other{{Integer(8), Integer(1), Integer(0), Integer(0), Integer(0)}, 1};
    auto w2 = evaluate_at_point(other, s, 17);
    EXPECT_EQ(w2.quotient, Quotient::b_over_t0);

    EXPECT_THROW(evaluate_at_point({pt.t, 0}, s, 17), precision_error);
    EXPECT_THROW(evaluate_at_point({pt.t, 2}, s, 2), precision_error);  // three unit digits needed at 2
    EXPECT_THROW(evaluate_at_point({pt.t, 3}, s, 2), precision_error);  // q = 10 has v2 = 1
    EXPECT_EQ(evaluate_at_point({pt.t, 4}, s, 2).q, 10);
    EXPECT_THROW(evaluate_at_point(pt, s, 15), std::domain_error);
}

// At exact rational points every defined quotient gives the same symbol at every place,
// and the symbols satisfy the product formula.
TEST(EvaluateAtPoint, QuotientsAgreeOnRationalPoints) {
    std::size_t points = 0;
    for (int D : {-7, -5, -2, -1, 2, 3, 5, 7}) {
        for (int A = -6; A <= 6; ++A) {
            for (int B = A + 1; B <= 6; ++B) {
                SurfaceParams s{D, A, B};
                if (!is_nonsingular(s)) continue;
                auto pt = rational_point_search(s, 6);
                if (!pt) continue;
                ASSERT_TRUE(on_surface(s, *pt));
                auto qs = quotient_values(s, *pt);
                if (qs.empty()) continue;
                ++points;
                int product = 1;
                for (const auto& v : places_for(s, qs)) {
                    int first = hilbert_symbol(qs[0], Rational(D), v);
                    for (const auto& q : qs) ASSERT_EQ(hilbert_symbol(q, Rational(D), v), first) << s.to_string();
                    product *= first;
                    if (!v.is_real() && fits_int64(v.prime)) {
                        LocalPoint lp{*pt, 40};
                        auto w = evaluate_at_point(lp, s, v.prime);
                        ASSERT_EQ(w.symbol, first) << s.to_string() << " at " << v.to_string();
                    }
                }
                ASSERT_EQ(product, 1) << s.to_string();
            }
        }
    }
    EXPECT_GT(points, 20u);
}

TEST(LocalEvaluation, Examples) {
    SurfaceParams s{17, 9, 11};
    auto e17 = local_evaluation(s, Place{17});
    EXPECT_EQ(e17.status, EvaluationStatus::constant);
    EXPECT_EQ(e17.rule, EvaluationRule::ramified_legendre);
    EXPECT_EQ(e17.value, Half::half);
    ASSERT_TRUE(e17.witness);
    EXPECT_EQ(e17.witness->value, Half::half);

    auto e2 = local_evaluation(s, Place{2});
    EXPECT_EQ(e2.rule, EvaluationRule::split_zero);
    EXPECT_EQ(e2.value, Half::zero);

    auto einf = local_evaluation(s, Place::real());
    EXPECT_EQ(einf.rule, EvaluationRule::real_positive_zero);
    EXPECT_EQ(einf.value, Half::zero);

    SurfaceParams t{17, 8, 1};
    auto t17 = local_evaluation(t, Place{17});
    EXPECT_EQ(t17.rule, EvaluationRule::ramified_legendre);
    EXPECT_EQ(t17.value, Half::zero);  // A + 1 = 9 is a square
    auto t7 = local_evaluation(t, Place{7});
    EXPECT_EQ(t7.rule, EvaluationRule::unramified_zero);
    EXPECT_EQ(t7.value, Half::zero);
}

TEST(LocalEvaluation, RuleHypotheses) {
    EXPECT_TRUE(unramified_zero_applies({5, 1, 2}, 3));   // 3 inert, A != B mod 3
    EXPECT_TRUE(unramified_zero_applies({5, 1, 4}, 3));   // A = B, A/D = 1/2 = 2 mod 3, a non-square
    EXPECT_FALSE(unramified_zero_applies({5, 2, 5}, 3));  // A = B, A/D = 1, a square
    EXPECT_FALSE(unramified_zero_applies({5, 3, 6}, 3));  // A = B = 0 mod 3
    EXPECT_FALSE(unramified_zero_applies({17, 1, 2}, 2)); // 2 splits
    EXPECT_FALSE(unramified_zero_applies({17, 1, 2}, 17));
    EXPECT_TRUE(ramified_congruences_hold({17, 9, 11}, 17));
    EXPECT_FALSE(ramified_congruences_hold({17, 9, 10}, 17));
    EXPECT_FALSE(ramified_congruences_hold({17, 3, 11}, 17));  // 3 is not a square mod 17
    EXPECT_EQ(ramified_legendre_value({17, 9, 11}, 17), Half::half);
}

// Where a rule applies, exhaustive sampling of Hensel-valid classes gives the same constant.
TEST(LocalEvaluation, RulesAgreeWithSampling) {
    SearchLimits budget;
    budget.tuple_cap = 200'000;  // refuses p^3 scans beyond p = 7 up front
    std::size_t compared = 0;
    for (int D : {5, 13, 17, -3, -7}) {
        for (int A = -8; A <= 8; ++A) {
            for (int B = -8; B <= 8; ++B) {
                SurfaceParams s{D, A, B};
                if (!is_nonsingular(s)) continue;
                for (std::int64_t p : {3, 5, 7, 13, 17}) {
                    Place v{p};
                    auto e = local_evaluation(s, v);
                    if (e.rule == EvaluationRule::sampled) continue;
                    ASSERT_EQ(e.status, EvaluationStatus::constant) << s.to_string() << " p=" << p << " " << e.detail;
                    auto sampled = sampled_evaluation(s, p, budget);
                    if (sampled.status == EvaluationStatus::undecided) continue;
                    ++compared;
                    ASSERT_EQ(sampled.status, EvaluationStatus::constant) << s.to_string() << " p=" << p;
                    ASSERT_EQ(sampled.value, e.value) << s.to_string() << " p=" << p;
                }
            }
        }
    }
    EXPECT_GT(compared, 1000u);
}

// D < 0: compare against a dense scan of real points t0/t1 = x.
TEST(LocalEvaluation, RealNegativeAgainstDenseScan) {
    for (int D : {-1, -3, -7}) {
        for (int A = -6; A <= 6; ++A) {
            for (int B = -6; B <= 6; ++B) {
                SurfaceParams s{D, A, B};
                if (!is_nonsingular(s)) continue;
                bool zero = false, half = false;
                for (int i = 0; i <= 4000; ++i) {
                    Rational x(i, 200);
                    if (x < 0 || (x + A) * (x + B) < 0) continue;
                    // (x + A) and (x + B) have the same sign on the real locus; the symbol is -1 iff negative.
                    Rational q = x + A != 0 ? Rational(x + A) : Rational(x + B);
                    (q < 0 ? half : zero) = true;
                }
                // t1 = 0: (T0 + A T1)/T0 = 1.
                zero = true;
                auto e = local_evaluation(s, Place::real());
                ASSERT_EQ(e.rule, EvaluationRule::sampled);
                if (zero && half) {
                    ASSERT_EQ(e.status, EvaluationStatus::non_constant) << s.to_string();
                } else {
                    ASSERT_EQ(e.status, EvaluationStatus::constant) << s.to_string();
                    ASSERT_EQ(e.value, half ? Half::half : Half::zero) << s.to_string();
                }
            }
        }
    }
}

TEST(Global, Counterexamples) {
    for (const SurfaceParams& s :
         std::vector<SurfaceParams>{{17, 9, 11}, {5, 1, 2}, {109, 9, 10}, {701, 25, 26}}) {
        auto c = global_obstruction(s);
        EXPECT_TRUE(c.nonsingular);
        EXPECT_EQ(c.verdict, Verdict::counterexample) << s.to_string();
        EXPECT_EQ(c.sum, Half::half);
        EXPECT_TRUE(c.reciprocity_check);
        for (const auto& l : c.locals) {
            EXPECT_EQ(l.solvability.status, LocalStatus::solvable);
            EXPECT_EQ(l.evaluation.status, EvaluationStatus::constant);
            if (l.solvability.witness) {
                EXPECT_TRUE(verify_witness(s, *l.solvability.witness));
            }
        }
    }
    auto c = global_obstruction({17, 9, 11});
    std::vector<std::string> places;
    for (const auto& l : c.locals) places.push_back(l.place.to_string());
    EXPECT_EQ(places, (std::vector<std::string>{"inf", "2", "17"}));
    EXPECT_EQ(at(c, "17").evaluation.value, Half::half);
    EXPECT_EQ(at(c, "2").evaluation.value, Half::zero);
}

TEST(Global, OtherVerdicts) {
    auto none = global_obstruction({17, 8, 1});
    EXPECT_EQ(none.verdict, Verdict::no_obstruction_from_alpha);
    EXPECT_EQ(none.sum, Half::zero);
    EXPECT_FALSE(none.reciprocity_check);
    EXPECT_EQ(at(none, "7").evaluation.rule, EvaluationRule::unramified_zero);

    EXPECT_EQ(global_obstruction({-3, 1, 2}).verdict, Verdict::not_locally_solvable);
    EXPECT_EQ(global_obstruction({13, 5, 2}).verdict, Verdict::not_locally_solvable);

    auto undecided = global_obstruction({-3, -3, -5});
    EXPECT_EQ(undecided.verdict, Verdict::undecided);
    EXPECT_EQ(at(undecided, "inf").evaluation.status, EvaluationStatus::non_constant);

    auto singular = global_obstruction({17, 9, 9});
    EXPECT_EQ(singular.verdict, Verdict::singular);
    EXPECT_TRUE(singular.locals.empty());
}

TEST(Global, EvaluationPlaces) {
    auto names = [](const std::vector<Place>& ps) {
        std::vector<std::string> out;
        for (const auto& p : ps) out.push_back(p.to_string());
        return out;
    };
    EXPECT_EQ(names(evaluation_places({17, 9, 11})), (std::vector<std::string>{"inf", "2", "17"}));
    // A - B = -7 and 7 is inert in Q(sqrt 17).
    EXPECT_EQ(names(evaluation_places({17, 8, 1})), (std::vector<std::string>{"inf", "2", "7", "17"}));
    // 4 * 17 has even valuation at 2.
    EXPECT_EQ(names(evaluation_places({68, 9, 11})), (std::vector<std::string>{"inf", "2", "17"}));
}

// A surface with a rational point is never reported as a counterexample.
TEST(Global, NoCounterexampleWithRationalPoint) {
    std::size_t with_points = 0, counterexamples = 0;
    for (int D = -7; D <= 17; ++D) {
        if (D == 0 || is_square(Integer(D))) continue;
        for (int A = -5; A <= 5; ++A) {
            for (int B = A + 1; B <= 5; ++B) {
                SurfaceParams s{D, A, B};
                if (!is_nonsingular(s)) continue;
                auto c = global_obstruction(s);
                auto pt = rational_point_search(s, 8);
                if (pt) ++with_points;
                if (c.verdict == Verdict::counterexample) {
                    ++counterexamples;
                    ASSERT_FALSE(pt) << s.to_string();
                    ASSERT_TRUE(c.reciprocity_check) << s.to_string();
                }
                if (pt) {
                    ASSERT_NE(c.verdict, Verdict::not_locally_solvable) << s.to_string();
                }
            }
        }
    }
    EXPECT_GT(with_points, 100u);
    EXPECT_GT(counterexamples, 0u);
}

TEST(Reciprocity, DetectsTampering) {
    auto c = global_obstruction({17, 9, 11});
    ASSERT_TRUE(reciprocity_selfcheck(c));

    auto flipped = c;
    for (auto& l : flipped.locals)
        if (l.place.to_string() == "17") l.evaluation.witness->symbol = 1;
    EXPECT_FALSE(reciprocity_selfcheck(flipped));

    auto wrong_q = c;
    for (auto& l : wrong_q.locals)
        if (l.place.to_string() == "17") l.evaluation.witness->q = 9;  // a square mod 17
    EXPECT_FALSE(reciprocity_selfcheck(wrong_q));

    auto wrong_sum = c;
    wrong_sum.sum = Half::zero;
    EXPECT_FALSE(reciprocity_selfcheck(wrong_sum));

    auto extra = c;
    for (auto& l : extra.locals)
        if (l.place.to_string() == "2") l.evaluation.value = Half::half;
    EXPECT_FALSE(reciprocity_selfcheck(extra));
}

TEST(RationalSearch, FindsSmallPoints) {
    SurfaceParams s{-1, -1, 3};
    auto pt = rational_point_search(s, 3);
    ASSERT_TRUE(pt);
    EXPECT_TRUE(on_surface(s, *pt));
    EXPECT_TRUE(on_surface(s, RationalPoint{2, 1, 1, 1, 2}));
    EXPECT_THROW(rational_point_search(s, 0), std::domain_error);
}

TEST(RationalSearch, NoneOnCounterexamples) {
    for (const SurfaceParams& s : std::vector<SurfaceParams>{{17, 9, 11}, {5, 1, 2}, {109, 9, 10}})
        EXPECT_FALSE(rational_point_search(s, 25)) << s.to_string();
}
