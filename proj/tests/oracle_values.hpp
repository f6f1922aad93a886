// Generated by tests/oracles/make_oracles.py. Do not edit.
#pragma once

#include <cstddef>

namespace gradstop::oracle_values {

struct Chi2Point { double x; int d; double cdf; double sf; };
inline constexpr Chi2Point chi2_grid[] = {
    {1.0, 1, 0.6826894921370859, 0.3173105078629141},
    {0.5, 3, 0.08110858834532414, 0.9188914116546758},
    {10.0, 5, 0.9247647538534878, 0.07523524614651218},
    {49.33494, 50, 0.5000001313191642, 0.49999986868083574},
    {100.0, 50, 0.9999654506861702, 3.454931382984864e-05},
    {30.0, 50, 0.011164780271550283, 0.9888352197284497},
    {0.001, 10, 2.6030818297031987e-19, 1.0},
    {200.0, 100, 0.9999999882154993, 1.1784500720979422e-08},
    {2400.0, 2500, 0.07721422702281683, 0.9227857729771831},
    {2600.0, 2500, 0.9200165237480705, 0.07998347625192943},
    {0.1, 1, 0.24817036595415073, 0.7518296340458492},
    {7.5, 2, 0.9764822541439909, 0.023517745856009107},
    {15.0, 4, 0.9952987828537434, 0.0047012171462565856},
    {400.0, 1000, 6.174261434528856e-71, 1.0}};
inline constexpr double chi2_cdf_1_1_quad = 0.6826894921370847;
inline constexpr double chi2_sf_8_1 = 0.004677734981047266;
inline constexpr std::size_t cov_5x3_rows = 5;
inline constexpr std::size_t cov_5x3_cols = 3;
inline constexpr double cov_5x3[] = {
    -0.21118912055729136, -0.5177334709845255, 0.1495958369624623,
    -1.7898968436779759, 0.2844522535691842, -0.3216956064836901,
    -0.726050324449302, 0.09853727513129668, -1.9514738484064804,
    -0.15841288562715672, -0.7312848653804448, 0.40969535789355127,
    0.44244173776631784, -0.9278626907702291, -0.9331679527718499};
inline constexpr std::size_t cov_5x3_sigma_rows = 3;
inline constexpr std::size_t cov_5x3_sigma_cols = 3;
inline constexpr double cov_5x3_sigma[] = {
    0.5605150347265572, -0.328511540521704, 0.03798000524232444,
    -0.328511540521704, 0.22215360235103318, -0.1489411508246017,
    0.03798000524232444, -0.1489411508246017, 0.7142798284991227};
inline constexpr std::size_t oas_50x4_rows = 50;
inline constexpr std::size_t oas_50x4_cols = 4;
inline constexpr double oas_50x4[] = {
    -2.6400743279779233, -2.5227078760812702, 0.9112390471858505, 2.592888250883021,
    0.7575994459262173, -0.8508008858632896, 0.09134108946471592, 1.7809203301390437,
    -1.3313790630513402, -1.168215880864154, 0.7115953059413879, 1.8850793387332738,
    0.7049407051079578, 0.47006046588669115, 0.5497381731671106, 1.2276765437374264,
    0.7503214481491505, 0.8091361821441814, -0.013058635088617265, 0.59081805296387,
    -1.747303220141881, -2.380472544010476, 0.626020889201329, 2.1112020756379013,
    -2.0891620531571173, -2.102832388208534, 0.6282724003389183, 1.706386087187643,
    -1.4472624764747195, -1.5827291860249133, 0.6801356241817124, 1.8281451094443344,
    0.2918224217874062, -1.5154188216389322, 0.8679512626067056, 2.497838374408238,
    0.4182075975979585, -1.460043106880796, 0.7261748403566834, 2.3617264172736205,
    2.0532052657300772, -1.757000476567145, -0.5488399073080632, 2.285048355227765,
    0.48425371254238087, -2.474960185194373, -0.03351856172075651, 2.7697759238531816,
    0.22888469220807134, -0.14221289040132257, 0.9994898973923296, 1.7729529827365873,
    2.1268660701028663, 0.39644272549387694, -0.02974961743867599, 1.6318112831478662,
    0.20214603459908154, -1.630405886600725, 0.6335493444386955, 2.4410021050705697,
    1.5543140642558417, -1.8878203610557478, 0.361716503087954, 2.748387841323643,
    1.0514651202655376, -1.025358780755398, 0.14404203210082794, 2.045678092407847,
    -0.8506167977603774, -2.059597145605231, 0.6761665214061667, 2.910348240530435,
    -1.695513750735587, -0.3437111214290265, 1.4629836034256176, 1.3075751832132343,
    0.6804692107231449, -0.3808436009332564, 0.18339501208336423, 1.6471867373578755,
    2.0558195801968027, 1.1373925909608915, 0.7322483706992893, 1.3748847791579353,
    3.9242330494943163, 0.10904881427915991, -0.2031259629866532, 1.6191676202168706,
    0.8729096028878216, -2.1239891364580705, 0.5996975956480275, 3.147716421873766,
    1.9221145331264418, -0.43175784946750284, 0.7845580674672312, 2.2637060888786835,
    0.40013544532653894, 0.42514881786066105, 0.26167826163067137, 0.8259499347618082,
    2.250514819807902, -1.575904684126248, -0.28517148295720374, 2.275747887919671,
    2.66151171191797, -0.5990015814381109, -0.018163736694289945, 1.8546486627667493,
    -1.8275761776785224, -0.6053616416026907, 0.9286564048492933, 1.200684566744266,
    1.8837956888466583, -1.5099213105007947, 0.7266075988121041, 3.033082265483281,
    -0.7260862826293901, -1.5216867029191308, 0.6158165572334527, 2.2592309533645665,
    -1.0976714047982288, -2.1734451547744733, 0.5601081772622847, 2.5037693034673483,
    2.054510914666405, -1.038125444691691, 0.5282774127069594, 2.4599023781837013,
    3.0715563809792705, -1.39918278910411, -0.16865352082562068, 2.807000551132496,
    2.326336819390206, 0.9667517514235435, 0.5077754083860117, 1.6191145232293724,
    -1.3390508110843122, -1.0826769222956671, 0.716514529669281, 1.7652111457601432,
    -1.603715313917935, -2.5737659541666056, 1.0792541394444217, 3.1612707809161202,
    1.4222364587020229, -1.4216537501556246, 0.42805033292316064, 2.7444923331817166,
    2.76692600502189, -0.15035221789655984, -0.4692632759979988, 1.4559888080664694,
    0.24510981949334387, -0.22151739512819757, 0.567565432335664, 1.235957147875224,
    2.6007837976922117, -0.039205129474434, -0.2069673312154735, 1.4216848684978651,
    2.138291176922522, -1.8897947562022144, 0.3415732141428369, 3.196502295598139,
    -0.004438837900518577, -0.21002348085737266, 0.5492203777352902, 1.3490352689365666,
    3.5700034509605856, -1.0273694336501054, 0.5691994700979209, 2.8797046004158764,
    -1.4128952862049944, -0.5273065365344558, 0.6719802701536031, 1.1112847154190029,
    1.8791638298608055, 0.3525963290958567, 0.6506995468953375, 1.543017038879653,
    1.5565335565823186, -0.532001880327385, 0.8139654718809352, 2.402236282470012,
    -1.2918572239884665, -1.5233529215301744, 0.09277242661789803, 1.6557969183197139,
    1.1940764734586617, -0.7577109352004724, -0.16858985964756257, 1.55198143721647,
    1.6644048477770326, -0.8432018765237628, 0.30652022644223964, 2.443868455048781,
    1.566962896642038, -2.2820032974661526, 0.13686425183403728, 2.9454154738084415};
inline constexpr double oas_50x4_epsilon = 0.08419626348395746;
inline constexpr std::size_t woodbury_4x10_rows = 4;
inline constexpr std::size_t woodbury_4x10_cols = 10;
inline constexpr double woodbury_4x10[] = {
    -1.8248987995012351, 1.559973262745697, -1.0855979833528147, 0.08446013804170277, 1.6489709000243122, 1.1030184833835583, 0.3379506395915355, -0.4878619705323729, 0.6961226469452628, 0.33172945304386975,
    1.2214052379813731, 0.7882476766366309, 1.1291209900281716, -1.1036159537660333, -0.45906361244122373, 0.5597087582213239, 0.7688819559704259, -0.22425402572623587, -0.3018203149793166, 0.37292325417627814,
    0.524923341438048, 2.364022468000262, 0.01605027656004715, 0.9374641051200776, -1.312828507441599, 0.29960042184662916, 0.07875843822234307, -0.8884422140339446, -0.5706107733530734, -0.24534425445118702,
    -0.3819498769887497, -1.4978734842594803, 0.07628965544900196, 0.30107362033060175, 0.0938483798811584, 1.214338578088705, 0.22896373607186626, 0.49928257456339364, 0.364098324263105, 0.5168860490462447};
inline constexpr double woodbury_4x10_z = 9.695270485587455;
inline constexpr double woodbury_4x10_epsilon = 0.8972937181705003;
inline constexpr std::size_t direct_6x3_rows = 6;
inline constexpr std::size_t direct_6x3_cols = 3;
inline constexpr double direct_6x3[] = {
    -0.8596985558643371, -0.08704239066016545, 1.9920603835063502,
    0.5263675799066463, 0.03610830576955443, -0.2500592029581045,
    0.5783701711191025, 0.20567220979363493, 0.4163058545097952,
    1.0751591100876379, 0.34438793930994205, 0.1098771849426214,
    -0.4137381354673066, -1.1258723666881694, 0.6267405017311268,
    0.5581254480412572, -0.4598440421299452, -0.35861699365978156};
inline constexpr double direct_6x3_z = 5.266074966592539;
inline constexpr std::size_t pair_4x3_rows = 4;
inline constexpr std::size_t pair_4x3_cols = 3;
inline constexpr double pair_4x3[] = {
    -1.093405474806862, -0.9894196144989964, -0.3479788820664245,
    -0.06012042750126488, 0.8732174075665686, 0.5613303996435267,
    -0.5457805445492988, 0.8097528238742074, -1.9486359745985573,
    -0.3929869104035927, 0.4826859939822945, 1.4741208618445958};
inline constexpr double pair_4x3_sign = -0.3333333333333333;
inline constexpr double pair_4x3_cos = -0.12665637487316897;
inline constexpr double pair_4x3_gsnr = 0.7062641328430357;
inline constexpr double pair_4x3_eb = -1.8250565313721427;
inline constexpr std::size_t gd_half1_rows = 3;
inline constexpr std::size_t gd_half1_cols = 4;
inline constexpr double gd_half1[] = {
    -1.6445230276621392, -1.2079064814818765, -0.4991405569808023, -1.5713257032487187,
    -0.04745187076638793, 0.25963026908314096, -0.2690300925532661, -0.8837856311005597,
    1.8751841695015485, 1.5750578559633508, 0.3046682601289299, 1.4664767952041904};
inline constexpr std::size_t gd_half2_rows = 3;
inline constexpr std::size_t gd_half2_cols = 4;
inline constexpr double gd_half2[] = {
    -0.7931273699000598, -1.3299786745392952, 0.25262467493712804, 1.803245001202149,
    -0.2284099467575461, 0.7539653386670736, 1.2587701061125052, 0.04446466447040762,
    0.8410133212594327, -0.6608060441848072, 1.2900759480879924, 0.42109296809531144};
inline constexpr double gd_disparity = 1.6625367853796151;
inline constexpr std::size_t logit_features_rows = 3;
inline constexpr std::size_t logit_features_cols = 2;
inline constexpr double logit_features[] = {
    0.5, -1.2,
    1.5, 0.3,
    -0.7, 0.8};
inline constexpr std::size_t logit_theta_rows = 1;
inline constexpr std::size_t logit_theta_cols = 3;
inline constexpr double logit_theta[] = {
    0.4, -0.9, 0.25};
inline constexpr std::size_t logit_losses_rows = 1;
inline constexpr std::size_t logit_losses_cols = 3;
inline constexpr double logit_losses[] = {
    0.2476322024302123, 1.0762456695015532, 1.1884960061149};
inline constexpr double adam_theta_step1 = 0.950000000625;
inline constexpr double adam_theta_step2 = 0.9317021063990222;

}  // namespace gradstop::oracle_values
