#pragma once

#include "homsys/hfun.hpp"
#include "homsys/models.hpp"

namespace homsys {

/// int_0^inf t^a T_F(t)^b dt to absolute error tol. Throws IntegrationFailure
/// with the partial sum when the tail does not die out.
double gamma(const HFunction& f, double a, double b, double tol = 1e-10);

/// max(Gamma^(1+eta,1), Gamma^(0,2+eta)) for eta in (0, 1].
double m_eta(const HFunction& f, double eta, double tol = 1e-10);

/// int_0^inf g(t) dt.
double alpha(const GFunction& g, double tol = 1e-12);

/// 9/4 E[Gamma^(0,2) + 2 Gamma^(1,1)]; DegenerateModel if every atom is max or min.
double c_star(const ModelSpec& m, double tol = 1e-10);

/// a Gamma_{F#}^(a-1,b) - b Gamma_F^(b-1,a).
double check_ipp(const HFunction& f, double a, double b, double tol = 1e-10);

struct MomentTable {
    double gamma01 = 0, gamma02 = 0, gamma11 = 0;
    double gamma_1eta_1 = 0, gamma_0_2eta = 0;
    double r = 0, m_eta = 0, eta = 1;
};

MomentTable moment_table(const HFunction& f, double eta = 1.0, double tol = 1e-10);

}  // namespace homsys
