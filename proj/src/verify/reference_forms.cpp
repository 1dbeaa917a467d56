#include "verify/reference_forms.hpp"

#include <cmath>

namespace levyqsd::reference {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);
const double kCbrt2 = std::cbrt(2.0);

double sq(double x) { return x * x; }

}  // namespace

double brownian_c1(double a, double b) { return -4.0 * kSqrt2 / (sq(a + 1.0) * sq(b + 1.0)); }

double brownian_c3(double a, double b) {
    return -8.0 * kSqrt2 * (2.0 + a * (2.0 + a) + b * (2.0 + b)) / (std::pow(1.0 + a, 4) * std::pow(1.0 + b, 4));
}

double brownian_mu(double a, double b) { return sq(1.0 / (1.0 + a)) * sq(1.0 / (1.0 + b)); }

double brownian_xi(double a, double b) {
    const double pa = a + 1.0;
    const double pb = b + 1.0;
    return 2.0 / (std::pow(pa, 4) * sq(pb)) + 2.0 / (sq(pa) * std::pow(pb, 4)) - 4.0 / (sq(pa) * sq(pb));
}

double erlang_density(int shape, double x) {
    double f = std::exp(-x);
    for (int i = 1; i < shape; ++i) f *= x / i;
    return f;
}

double brownian_mu_density(double x, double y) { return erlang_density(2, x) * erlang_density(2, y); }

double brownian_xi_density(double x, double y) {
    return 2.0 * erlang_density(4, x) * erlang_density(2, y) + 2.0 * erlang_density(2, x) * erlang_density(4, y) -
           4.0 * erlang_density(2, x) * erlang_density(2, y);
}

double erlang2_theta_star(double lambda, double nu) { return std::cbrt(2.0 * lambda * nu * nu) - nu; }

double erlang2_zeta_star(double lambda, double nu) {
    return 3.0 * std::cbrt(lambda * nu * nu) / std::pow(2.0, 2.0 / 3.0) - nu - lambda;
}

double erlang2_c1_display(double lam, double nu, double al, double be) {
    const double c = std::cbrt(lam) * std::pow(nu, 2.0 / 3.0);
    const double num = std::pow(2.0, 5.0 / 3.0) * lam * sq(be + nu) * (2.0 * lam - nu) * std::sqrt(c) *
                       (al + kCbrt2 * c) * (al + kCbrt2 * c + 2.0 * nu);
    const double den1 = kSqrt3 * nu *
                        sq(al * al + 2.0 * kCbrt2 * al * c - lam * (al + nu) +
                           std::pow(2.0, 2.0 / 3.0) * std::pow(lam, 2.0 / 3.0) * std::pow(nu, 4.0 / 3.0) -
                           kCbrt2 * std::pow(lam, 4.0 / 3.0) * std::pow(nu, 2.0 / 3.0));
    const double den2 = 2.0 * be * be * be - 3.0 * kCbrt2 * be * be * c + 6.0 * be * be * nu -
                        6.0 * kCbrt2 * be * std::cbrt(lam) * std::pow(nu, 5.0 / 3.0) +
                        2.0 * nu * nu * (3.0 * be + lam) - 3.0 * kCbrt2 * std::cbrt(lam) * std::pow(nu, 8.0 / 3.0) +
                        2.0 * nu * nu * nu;
    return num / den1 / den2;
}

double erlang2_c3_display(double lam, double nu, double al, double be) {
    const double s = std::cbrt(lam) * std::pow(nu, 2.0 / 3.0);
    const double s15 = std::pow(s, 1.5);
    const double rs = std::sqrt(s);
    const double c4 = std::cbrt(4.0);
    const double w = kCbrt2 * s + al;
    const double p = kCbrt2 * s + nu * nu * lam / sq(w) - lam + al - nu;
    const double r = 3.0 * s / std::pow(2.0, 2.0 / 3.0) - nu * nu * lam / sq(be + nu) - be - nu;
    const double q1 = al * al + 3.0 * kCbrt2 * al * s + 3.0 * std::pow(2.0, 2.0 / 3.0) * std::pow(lam, 2.0 / 3.0) *
                                                             std::pow(nu, 4.0 / 3.0);
    const double q1b = al * al + 3.0 * kCbrt2 * al * s + 3.0 * c4 * std::pow(lam, 2.0 / 3.0) * std::pow(nu, 4.0 / 3.0);
    const double q2 = al * al + 2.0 * kCbrt2 * al * s - al * lam +
                      std::pow(2.0, 2.0 / 3.0) * std::pow(lam, 2.0 / 3.0) * std::pow(nu, 4.0 / 3.0) -
                      kCbrt2 * std::pow(lam, 4.0 / 3.0) * std::pow(nu, 2.0 / 3.0) - lam * nu;
    const double u = 1.0 - 2.0 * lam * nu * nu / (w * w * w);
    const double m = al + kCbrt2 * s - nu;
    const double w4 = std::pow(w, 4);

    const double first = (std::pow(2.0, 2.0 / 3.0) * rs * p / kSqrt3 -
                          std::pow(2.0, 2.0 / 3.0) * al * rs * m * q1 / (kSqrt3 * w * w * w)) /
                         (sq(p) * sq(r));
    const double t1 = 8.0 * p * sq(u) * s15 / kSqrt3;
    const double t2 = 8.0 * kSqrt3 * lam * nu * nu * sq(p) * s15 / w4;
    const double t3 = 8.0 * al * al * al * s15 * m * std::pow(q1b, 3) / (kSqrt3 * std::pow(w, 9));
    const double t4 = 16.0 * kSqrt3 * al * lam * nu * nu * p * u * s15 / w4;
    const double t5 = 16.0 * kSqrt3 * lam * (kCbrt2 * s - nu) * nu * nu * p * u * s15 / w4;
    const double t6 = 32.0 * lam * nu * nu * s15 * std::pow(m, 3) * sq(q2) / (kSqrt3 * std::pow(w, 9));
    const double t7 = 16.0 * c4 * al * lam * nu * nu * sq(p) * rs / (kSqrt3 * w4);
    const double t8 = 16.0 * c4 * lam * (kCbrt2 * s - nu) * nu * nu * sq(p) * rs / (kSqrt3 * w4);
    const double t9 = q1b * q2 * 16.0 * c4 * al * lam * rs * std::pow(m, 3) * (al + kCbrt2 * s + 2.0 * nu) /
                      (3.0 * kSqrt3 * std::pow(w, 8));
    const double t10 = 86.0 * kCbrt2 * lam * std::pow(m, 4) * (al + kCbrt2 * s + 2.0 * nu) * sq(q2) /
                       (9.0 * kSqrt3 * rs * std::pow(w, 7));
    const double second = (t1 - t2 - t3 + t4 + t5 + t6 + t7 + t8 - t9 + t10) / (6.0 * std::pow(p, 4) * r);
    return (1.0 - 2.0 * lam / nu) * (first - second);
}

namespace {

const double kK = std::cbrt(2.0) * std::pow(3.0, 2.0 / 3.0);

double alpha_factor(double al) {
    return -al * al - std::pow(2.0, 4.0 / 3.0) * std::pow(3.0, 2.0 / 3.0) * al + al -
           std::pow(2.0, 2.0 / 3.0) * std::pow(3.0, 4.0 / 3.0) + kK + 3.0;
}

}  // namespace

double erlang2_mu_display(double al, double be) {
    const double num = sq(8.0 - kCbrt2 * std::pow(3.0, 5.0 / 3.0)) * (al + kK) * (al + kK + 6.0) * sq(be + 3.0);
    const double den = 2.0 * sq(alpha_factor(al)) *
                       (-2.0 * be * be * be + 3.0 * (kK - 6.0) * be * be + 18.0 * (kK - 3.0) * be +
                        9.0 * (kCbrt2 * std::pow(3.0, 5.0 / 3.0) - 8.0));
    return -num / den;
}

double erlang2_xi_display(double al, double be) {
    const double i1 = std::pow(2.0, 5.0 / 3.0) * (al + kK) * (al + kK + 6.0) * sq(be + 3.0);
    const double i2 = std::pow(3.0, 7.0 / 6.0) * sq(alpha_factor(al)) *
                      (-2.0 * be * be * be + 3.0 * (kK - 6.0) * be * be + 18.0 * (kK - 3.0) * be +
                       9.0 * (3.0 * kCbrt2 * std::pow(3.0, 2.0 / 3.0) - 8.0));
    return i1 / i2;
}

}  // namespace levyqsd::reference
