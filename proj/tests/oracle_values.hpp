// Generated by tests/oracles/generate_oracles.py (mpmath, 40 digits).
// Do not edit by hand.
#pragma once

#include <complex>

namespace oracle {

inline const std::complex<double> kLogGamma_075_2i{-2.0514109102411857315, -0.21578058346258940297};
inline const std::complex<double> kLogGamma_03_m7i{-10.465674446702918896, -6.3103096470407681554};
inline const std::complex<double> kLogGamma_m25_1i{-2.3441906524655925559, -8.3041279866579258844};
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kDigamma10 = 2.2517525890667211076;
inline constexpr double kDigamma01 = -10.423754940411076795;
inline constexpr double kEiMinus1 = -0.21938393439552027368;
inline constexpr double kEiMinus2 = -0.048900510708061119567;
inline constexpr double kEiMinus50 = -3.7832640295504590187e-24;
inline constexpr double kEiMinus0p01 = -4.0379295765381138318;
inline constexpr double kEiMinus7p5 = -0.000065830893267080230617;
inline constexpr double kFirstZetaZero = 14.13472514173469379;  // Hardy Z root near 14.13

// zeta at assorted points (accuracy spot checks)
inline const std::complex<double> kZetaPoints[][2] = {
    {{0.75, 5}, {0.73221224880428829216, 0.20379320276412618023}},
    {{0.55, 20}, {0.4646134295602948011, -1.0153361723450552224}},
    {{0.95, -37.5}, {0.57171674521993941018, 0.22175219405059928941}},
    {{0.25, 99.0}, {-1.0302588066524498741, 1.0991617262695473425}},
    {{1.5, 3}, {0.71983412483453084597, -0.11844908318875969628}},
    {{0.5, 50.0}, {-0.081712108320979975048, 0.33079219403866129559}},
    {{0.6, 0.0}, {-1.9526614482240005933, 0.0}},
    {{2.0, 1.0}, {1.1503557032549026717, -0.43753086591960788112}},
};

// Mellin-side quadratures of the three convolution kernels
inline const std::complex<double> kSalemSymbol_075_0{0.79788802946599431541, 0.0};  // int t^-0.25/(e^t+1)
inline const std::complex<double> kSalemSymbol_075_5{-0.0022043472503687420688, -0.0009206583231255524138};
inline const std::complex<double> kFracSymbol_06_0{3.2544357470400012126, 0.0};  // int {1/t} t^-0.4
inline const std::complex<double> kFracSymbol_06_1{0.48594873835412028537, 0.49852724997098427649};
inline const std::complex<double> kDigammaSymbol_075_3{-0.00015284940048814724262, -0.0001951467281930180942};
inline const std::complex<double> kDigammaSymbol_09_0{6.1307250950757693873, 0.0};

// int_0^inf Ei(-beta y) y^(s-1) dy
inline const std::complex<double> kEiMellin_1_075{-1.6338889366202368602, 0.0};
inline const std::complex<double> kEiMellin_2_075_3i{0.0051789237205877133357, 0.0023648115892512303722};

}  // namespace oracle
