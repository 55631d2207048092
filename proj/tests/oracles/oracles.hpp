#pragma once

// Generated by generate_oracles.py (mpmath, 40 digits). Do not edit.

namespace oracle {
inline constexpr double kSlantRange0 = 3.1810375665810676e+6;
inline constexpr double kSlantRange10 = 2.2616137413400686e+6;
inline constexpr double kSlantRange90 = 7.5e+5;
inline constexpr double kPassDurationAbove10 = 605.55147190458688;
inline constexpr double kPassDurationAbove20 = 424.71892459216127;
inline constexpr double kPhotonEnergy = 2.3369951260575632e-19;
inline constexpr double kDiffractionWidth = 13.528178478789101;
inline constexpr double kDiffractionFraction = 0.010868771659523555;
inline constexpr double kDiffractionLossDb = 19.638195351809006;
inline constexpr double kFixedWidth = 36.375;
inline constexpr double kFixedFraction = 1.5104133063569821e-3;
inline constexpr double kFixedLossDb = 28.209041970052513;
inline constexpr double kFixedLoss400Db = 22.75726886876;
inline constexpr double kPhotons10s = 1.5104133063569821e+5;
inline constexpr double kDivergenceFor28201 = 4.8455082324532327e-5;
inline constexpr double kPdtcT0sq_001 = 1.9998000133326667e-4;
inline constexpr double kPdtcShape_001 = 2.0000000000006667;
inline constexpr double kPdtcScale_001 = 70.714213799766849;
inline constexpr double kPdtcT0sq_01 = 0.019801326693244698;
inline constexpr double kPdtcShape_01 = 2.0000006665736557;
inline constexpr double kPdtcScale_01 = 7.1065650786857893;
inline constexpr double kPdtcT0sq_1 = 0.86466471676338731;
inline constexpr double kPdtcShape_1 = 2.3128960757064768;
inline constexpr double kPdtcScale_1 = 1.1136114660787631;
inline constexpr double kPdtcT0sq_3 = 0.99999998477002026;
inline constexpr double kPdtcShape_3 = 6.6592140692905517;
inline constexpr double kPdtcScale_3 = 1.0416198352793078;
inline constexpr double kPdtcT0sq_W364 = 1.5083408402453646e-3;
inline constexpr double kPdtcShape_W364 = 2.0000000002866158;
inline constexpr double kPdtcScale_W364 = 25.748402881783196;
inline constexpr double kCn2Ground = 1.727e-14;
inline constexpr double kCn2At10km = 1.6657319221014638e-17;
inline constexpr double kCn2PathAverage = 1.116992215642152e-16;
inline constexpr double kRytovZenith = 0.12525277912597965;
inline constexpr double kRytov60 = 0.44635016146740127;
inline constexpr double kRytov80 = 3.1025963874373667;
inline constexpr double kWanderVarianceZenith = 5.7633702186863927e-4;
inline constexpr double kKernelExpectation = 2.8209479177387814;
inline constexpr double kScintQuantileZenith = 3.3460121814286314;
inline constexpr double kMeanAbsDeviationZenith = 0.28091307195505742;
}  // namespace oracle
