#pragma once
// Generated by make_oracles.py; do not edit by hand.
#include <cstdint>
#include <cstddef>

namespace oracle {

inline constexpr std::uint64_t kSplitmix0 = 0xe220a8397b1dcdafull;
inline constexpr std::uint64_t kSplitmix12345 = 0x22118258a9d111a0ull;
inline constexpr std::uint64_t kMix_20120101_7 = 0xa4b1630fe8c3a916ull;
inline constexpr std::uint64_t kFnvWaveL1 = 0xb1fdb7ea18292a08ull;
inline constexpr double kUniform42[] = {0.13967200376411754, 0.9693205787161252, 0.9701959318564763, 0.24868399646686662};
inline constexpr double kNormal42[] = {1.9474165742871408, -0.38011255818728285, 0.0020340498901774908, 0.24598848590197608};
inline constexpr double kSignalX[] = {0.0, 0.1, 0.3, 0.5, 0.72, 0.9, 1.0};
inline constexpr double kSignal_wave[] = {0.7999999999999999, 0.5927050983124843, 0.2572949016875157, 0.7999999999999999, 0.2503023038474804, 0.592705098312484, 0.7999999999999999};
inline constexpr double kSignal_heavisine[] = {0.0, 3.8042260651806146, -3.351141009169892, -2.000000000000001, 0.4724982107387119, -3.8042260651806146, -1.9984014443252818e-15};
inline constexpr double kSignal_doppler[] = {-0.0, -2.6459798629221894e-15, -3.367221994006876e-16, -0.2703204087277996, 0.33933071729206465, 0.18426381380690007, -0.0};
inline constexpr double kSignal_spikes[] = {5.025670731457106e-10, 0.008698320313813809, 0.01739664062762768, 0.09885810065266616, 5.025670731456927e-10, 1.8728931773207757e-15, 1.0802007537568652e-60};
inline constexpr double kGenWaveX[] = {0.11091316000070833, 0.2305339069456776, 0.4007726906932158, 0.5324652433825516, 0.5553191281704939, 0.6914395813329579, 0.8904958874189624, 0.8926985632057756};
inline constexpr double kGenWaveY[] = {0.5100934809132865, 0.32196732081934015, 0.6108943295822574, 0.6160428852189956, 0.5965254923293939, 0.3138241027583874, 0.49635333369624735, 0.5355485246744146};
inline constexpr double kDwtInput[] = {0.0, 1.063558185417193, 0.7155013718214642, -0.38776615918397406, -0.4834546557201531, 0.7151199880878155, 1.5985433453746052, 1.0190983623493521, -0.02782646908565367, 0.13801641608096793, 1.420167036826641, 2.0867719642746136, 1.3077536522994424, 0.3708759872656303, 0.795167177593716, 2.105539869719601};
inline constexpr double kDwtDb2[] = {3.1092665182803136, -1.0693984084050163, 0.40248890608969334, -1.1959205245634283, -0.3805482912135476, -1.6022247844983015, -0.8800274661901022, 0.4474608686505638, 0.5474151911666268, -0.7554714184195293, 0.7472947327041349, -0.525225485392525, 0.15282489012706546, 0.263317626223068, -0.6040927150757778, -1.0885052150442664};
inline constexpr double kDwtHaar[] = {3.109266518280314, -0.9889662992071637, -0.5154856666734066, -0.3401918085013998, 0.3679114863898513, -1.192988187678147, -1.69837452705297, -0.6110387038741221, -0.7520492050949565, 0.780127952636885, -0.8475202583948653, 0.40972947682168037, -0.11726862871286002, -0.4713608645708278, 0.6624725500876274, -0.9265734164838854};
inline constexpr double kHistX[] = {0.031199087592202523, 0.05587700937162182, 0.062360806343357444, 0.07838988865871094, 0.08754034252418547, 0.09108029332590012, 0.12392184510223009, 0.1470403820039105, 0.15040367740594934, 0.16329237701511506, 0.18379314083197645, 0.21368820232025337, 0.2233225187875328, 0.2612100653140144, 0.2631993276615459, 0.27865325471027297, 0.28384240190044047, 0.29264964308277247, 0.31927508830909274, 0.32406094019268755, 0.333614583478449, 0.34961534465741445, 0.3645766192300625, 0.38687867935560466, 0.4010257078331158, 0.4037390104673512, 0.40827101360911294, 0.44012442189577433, 0.4830986905505, 0.49605612469750066, 0.515823103286841, 0.5197487902943563, 0.5419650652967785, 0.5439074720890602, 0.5551718143369069, 0.572926732032508, 0.5771528331924825, 0.5899370947240143, 0.608105212634475, 0.6476509705464042, 0.6510173367260674, 0.6517516520002744, 0.6647301824185781, 0.6855077345606064, 0.6961962523824772, 0.7110970389007312, 0.7241326578565566, 0.7600333165014077, 0.7665472304042202, 0.7712337175520203, 0.8018927122063177, 0.8153565397246316, 0.8280307973787095, 0.831938147495439, 0.8732961241873494, 0.8792227807188497, 0.881766607164296, 0.889830971094294, 0.8901994693282596, 0.8947925929382889, 0.8967231934897391, 0.9078625676498653, 0.9110238940780195, 0.9511037529131487};
inline constexpr double kHistY[] = {0.6311312880420031, 0.6085099127636641, 0.6418618855991729, 0.6952333720526058, 0.6911517821247315, 0.6711245387795229, 0.40465726010108394, 0.4562324506674176, 0.4764207898376514, 0.4969339803311395, 0.38369088344750046, 0.21642722758383504, 0.2625723095639406, 0.3847855802435901, 0.35889545231211434, 0.2568663240987558, 0.24251991431354505, 0.23004069128782328, 0.4244032304426316, 0.45347311461495643, 0.511955520150573, 0.48555222119123714, 0.3993206411045421, 0.4601073790048442, 0.5923742495044305, 0.6217233107540332, 0.6555322318294173, 0.6367318876823453, 0.7349690939582059, 0.7651019345093284, 0.7184907898381724, 0.706269335658558, 0.5616923058448596, 0.5748460936776187, 0.6109561708436998, 0.7031579295497933, 0.6978476951219328, 0.6629506220585681, 0.5079562999669233, 0.4570589737276953, 0.47160104637627226, 0.465994037009653, 0.5111764689393804, 0.3780679529050339, 0.2837530275302847, 0.2332872440689266, 0.2636593664655279, 0.3761662180575504, 0.35756353516932504, 0.2986629970094639, 0.2682722176950745, 0.3731038504139251, 0.47785820786949923, 0.4935144057652591, 0.3917222790201606, 0.42103099145934314, 0.41791413047200177, 0.5154275850988603, 0.5015448931505644, 0.5497744174500543, 0.539718842664526, 0.6651604406395841, 0.7029704298954943, 0.5647105535915219};
inline constexpr double kHistRisk[] = {0.022106650553847033, 0.021654106043990012, 0.008268460816199164, 0.004343039147200254};
inline constexpr double kOrderedHaarRisk[] = {0.021876558408310088, 0.02136235707384305, 0.007782344023149363, 0.004672600020562296, 0.0013712206820605428};
inline constexpr std::size_t kPathDims[] = {2, 4, 8, 16, 32, 64};
inline constexpr double kPathRisks[] = {0.3, 0.12, 0.05, 0.0455, 0.041, 0.032};
inline constexpr std::size_t kPathN = 128;
inline constexpr double kPathLo[] = {0.0, 0.036, 0.07200000000000006, 2.2399999999999998, 11.52};
inline constexpr double kPathHi[] = {0.036, 0.07200000000000006, 2.2399999999999998, 11.52, 1e308};
inline constexpr std::size_t kPathSel[] = {64, 16, 8, 4, 2};
inline constexpr double kJumpAlpha = 0.036;
inline constexpr std::size_t kJumpFrom = 64, kJumpTo = 16;
inline constexpr double kCpSigma2 = 0.064;
inline constexpr std::size_t kCpChoice = 8;
inline constexpr std::size_t kShChoice = 8;
inline constexpr double kVfY[] = {0.3, -0.1, 0.8, 0.45, 0.2, 0.9, -0.3, 0.05};
inline constexpr double kVfPred[] = {0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.0, 0.1, 0.2, 0.30000000000000004, 0.4, 0.5, 0.6000000000000001, 0.7000000000000001, 0.05, 0.14, 0.22999999999999998, 0.32, 0.41, 0.49999999999999994, 0.5900000000000001, 0.68};
inline constexpr double kVfcv[] = {0.159375, 0.23357500000000003};
inline constexpr double kPenVf[] = {0.0018750000000000017, -0.003924999999999984};

}  // namespace oracle
