#pragma once

// Generated by tests/oracles/make_oracles.py; do not edit by hand.

namespace oracle {

// Gamma(0.3)
inline constexpr double kGamma0_3 = 2.991568987687591;
// log Gamma(7.5)
inline constexpr double kLogGamma7_5 = 7.534364236758733;
// B(0.7, 0.8)
inline constexpr double kBeta0_7_0_8 = 1.7052456260633313;
// 2F1(-0.2, 0.2; 0.8; -0.3)
inline constexpr double kHyp_a = 1.0139446374390466;
// 2F1(-0.2, 0.2; 0.8; -5.0)
inline constexpr double kHyp_b = 1.1346386846230243;
// 2F1(0.3, -0.3; 1.3; -50.0)
inline constexpr double kHyp_c = 1.8394318160619194;
// 2F1(0.25, 0.25; 1.25; -3.0)
inline constexpr double kHyp_d = 0.9164966152109495;
// 2F1(0.5, 0.5; 1.5; 0.4)
inline constexpr double kHyp_e = 1.0826361195712084;
// 2F1(-0.4, 0.4; 0.1; -0.9)
inline constexpr double kHyp_f = 2.1129074081786845;
// MVN constant at H=0.1, direct quadrature
inline constexpr double kAlphaH1 = 2.7957499970770616;
// MVN constant at H=0.3, direct quadrature
inline constexpr double kAlphaH3 = 1.3693322866155857;
// MVN constant at H=0.7, direct quadrature
inline constexpr double kAlphaH7 = 0.9159110065240201;
// MVN constant at H=0.9, direct quadrature
inline constexpr double kAlphaH9 = 1.2327102401654944;
// phi(0.3)
inline constexpr double kPhi3 = 0.05470655022115569;
// phi(0.5)
inline constexpr double kPhi5 = 0.07957747154594767;
// phi(0.8)
inline constexpr double kPhi8 = 0.07961260794056657;
// RL(0.25) covariance at (0.4, 0.9)
inline constexpr double kCovRl_04_09_025 = 0.7445124319586942;
// RL(0.7) covariance at (0.3, 1.0)
inline constexpr double kCovRl_03_10_070 = 0.19067777521565166;
// aux Y(0.2) covariance at (0.4, 0.9)
inline constexpr double kCovY_04_09_020 = 2.0149741031206405;
// K_H(1, 0.4) at H=0.3
inline constexpr double kKernel_10_04_03 = 0.8546294900260054;
// K_H(1, 0.4) at H=0.7
inline constexpr double kKernel_10_04_07 = 1.0246562911871528;
// E|N|^3
inline constexpr double kBmDeltaM3 = 1.5957691216057308;
// fBm(0.3) first local time moment
inline constexpr double kFbm03DeltaM1 = 0.5699175434306182;
// fBm(0.3) second local time moment, double quadrature
inline constexpr double kFbm03DeltaM2 = 0.4415216517399815;
// RL(0.25) first moment
inline constexpr double kRl025DeltaM1 = 0.37612638903183754;
// Dirichlet simplex m=2 theta=1/4
inline constexpr double kDirichlet2_025 = 1.1296174463919721;
// Dirichlet simplex m=3 theta=1/2
inline constexpr double kDirichlet3_050 = 4.188790204786391;
// c_H at H=0.3
inline constexpr double kCh03 = 0.730282934079923;
// lower tail bound, H=0.3, d=1
inline constexpr double kChdLo03 = 0.9617396731290239;
// upper tail bound, H=0.3, d=1
inline constexpr double kChdHi03 = 1.1704129267530738;
// alpha_H^{1/H} at H=0.3
inline constexpr double kRlFactor03 = 2.851211894376615;
// sup_t {1.5 t - 0.7 t^{1/0.7}}
inline constexpr double kLegendre_07_03_15 = 1.1590231705852487;
// Q_KS(1)
inline constexpr double kKolmogorovSf1 = 0.26999967167735456;
// Q_KS(0.5)
inline constexpr double kKolmogorovSf0_5 = 0.9639452436648751;
// D for x^2 vs x on midpoint grids (150, 120)
inline constexpr double kKsStatistic = 0.25666666666666665;

}  // namespace oracle
