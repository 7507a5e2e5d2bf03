#pragma once

// Reference values produced by tests/oracle/golden_values.py (mpmath, 50
// significant digits, exact binomial tails). Regenerate with:
//   python3 tests/oracle/golden_values.py

namespace golden {

inline constexpr double kSiftedRateDefaults = 1312.881176830601148;     // bits/s
inline constexpr double kQberDefaults = 0.051817267639312227877;
inline constexpr double kValidDetectionDefaults = 0.00065644058841530057402;
inline constexpr double kErfInvOneMinus1e6 = 3.4589107372754987775;  // at the double nearest 1 - 1e-6
inline constexpr double kEdacOverhead001 = 0.092063561897747246957;
inline constexpr double kBennett4096 = 3817.5167027137358746;          // (4096, 40.96, 1e-6)
inline constexpr double kSlutsky4096 = 2830.1362152884856072;          // (4096, 40.96, 1e-6)
inline constexpr double kMultiphoton01 = 0.049166805522495037595;
inline constexpr double kMultiphoton1 = 0.41802329313067357561;
inline constexpr double kTail10_3_02 = 0.8791261184;                   // P[Bin(10, 0.2) <= 3]

// Myers-Pearson with exact binomial tails.
inline constexpr double kMyers4096_41_P = 0.019504968842806780421;
inline constexpr double kMyers4096_41_Pe = 0.63963255396974194757;
inline constexpr double kMyers4096_41_R = 1.3081114069736847268;
inline constexpr double kMyers4096_41_Entropy = 3654.6387244368934333;
inline constexpr double kMyers512_5_P = 0.04865535146297478151;
inline constexpr double kMyers512_5_Entropy = 330.6477636849862563;

inline constexpr double kIbetaInv4055_41_1e6 = 0.98082143876154777787;

inline constexpr double kGhM1Defaults = 0.000051599292250527191244;
inline constexpr double kGhM2Defaults = 0.00012562116659577689753;
inline constexpr double kGhDiscountDefaults = 251.24233319155379505;   // bits/s

inline constexpr double kDistilledRevised01 = 498.0339390129992095;
inline constexpr double kDistilledOriginal01 = 416.44596624598428278;
inline constexpr double kDistilledGh01 = 279.94134048373150181;
inline constexpr double kDistilledRevised11 = 4304.4360450821224952;
inline constexpr double kDistilledSlutsky01 = 153.54673097262381852;

}  // namespace golden
