#pragma once

// 20 fixed Welch test vector pairs with expected t, Welch-Satterthwaite df,
// and two-sided p frozen from scipy.stats.ttest_ind(equal_var=False).

#include <vector>

namespace testsupport {

struct WelchFixture {
    std::vector<double> x;
    std::vector<double> y;
    double t, df, p;
};

inline const std::vector<WelchFixture>& welch_fixtures() {
    static const std::vector<WelchFixture> fixtures = {
        {{-2.469, -0.972, -0.946, -2.682, -1.474, -0.645, 6.383, 1.461, -4.313, -0.608, 4.890},
         {-0.860, 1.820, 1.649, 1.940, 0.485},
         -1.0229075073852765, 13.811024405964549, 0.32393575634951577},
        {{-1.957, 2.076, 0.866, 0.525, -0.411, 0.326, 1.788},
         {-0.594, 1.859, 0.468, 3.337, 0.051, -1.999, 0.016, 1.979, 0.525, 2.241, -0.056},
         -0.36715060717780384, 13.928007249548415, 0.7190250315610193},
        {{-0.285, 6.784, -1.237, 5.648, -5.312, -1.012, 0.054, -2.351},
         {3.469, 7.113, 6.385, 1.165, -5.568},
         -0.8276072888043494, 7.107382772600169, 0.4347973552162885},
        {{-0.133, -0.571, -1.855, 2.353, 0.149},
         {-0.064, -1.049, 0.857, -0.032, 0.817, 3.577, 1.223, 0.769},
         -0.9282302215311106, 7.7893875891610636, 0.38115182195800557},
        {{-1.043, -1.271, 1.425, -1.030, -0.563},
         {-0.268, -0.597, -0.737, -0.793, -2.096, -1.615, 0.180, -0.138, -0.756, 0.593},
         0.22783377674526967, 6.161151509603463, 0.8271488375341753},
        {{-0.935, 0.113, 0.769, 0.098},
         {1.747, 1.570, 0.551, -0.451, 1.542, -0.705, -1.859},
         -0.5241050095533617, 8.979797487708804, 0.6128944199041394},
        {{0.177, -1.281, -0.278, -1.217, -1.189, -1.420, -0.019, 0.066, 0.248, 0.163, -1.437},
         {-0.819, 0.259, -1.511, -1.227, 0.469, -0.989, -0.205},
         0.03390038213596232, 12.548391505299705, 0.9734898889010235},
        {{-0.853, 1.522, 2.354, -6.312, -0.462, 0.817, 0.312, 1.558},
         {-7.035, -4.197, 6.826, 4.499, 5.262, 2.848},
         -0.6021291034189628, 6.7522125364611965, 0.5667485381052866},
        {{-0.853, 1.891, -2.026, -1.190, 0.054},
         {-1.330, -2.211, -1.854, -1.508, -0.186},
         1.322383589354511, 5.971795606993361, 0.23442797487561684},
        {{-2.505, 0.229, -2.419, -0.281, -2.261, -0.104, 0.545, -0.479, -5.524},
         {6.678, 5.034, 0.246},
         -2.6573462336689753, 2.4686458991399296, 0.09404329066115792},
        {{-0.182, -0.684, -0.317, 0.899},
         {2.310, 0.296, 0.465, 0.702, -0.178, 2.351, 2.702},
         -2.3328622267883787, 8.948140524646496, 0.04469490944864768},
        {{-1.791, -0.341, -1.962, -2.014, -2.743, -1.795, -0.725, 0.671, 3.815, 0.883},
         {-2.663, 0.445, -1.126, -2.211, 0.772, -0.693, -2.335, 0.230, -0.347, -1.229, -1.407},
         0.5053083487942012, 14.334093467887113, 0.6210226789784321},
        {{2.589, -2.150, 2.291, 4.134, -3.480, 4.331, -2.795, 4.312},
         {0.536, -3.420, -1.652, -3.226, -1.466, 0.559, -3.920, -0.604, -4.535, 1.004},
         2.0814822455703315, 10.885661916842528, 0.06180220504553452},
        {{2.319, -0.258, -1.901},
         {-0.971, -2.274, -1.137, -0.813, -2.999, 0.017, 1.241},
         0.7810019263384141, 2.777473029526455, 0.49590323195745667},
        {{-2.002, -1.074, 3.497, 2.578, 0.055, -1.930, -1.189, 6.262, -1.273, 2.366, 1.674},
         {0.838, 1.130, -2.275, -2.665, -10.453, -4.485, -2.701, -4.018},
         2.5808459988599504, 12.300323702568464, 0.023664360086441166},
        {{2.466, -3.446, -3.968, 0.117, -0.268, 1.599, -1.259, -3.363, 0.700, 1.122},
         {7.671, 1.178, 3.682, 2.938, 2.548, -0.988, 1.518},
         -2.6363651368950385, 11.655962839776556, 0.022178096129701747},
        {{0.819, -1.450, -0.623, 0.116, 1.445},
         {0.854, 1.903, 2.241, 1.835, 1.077, 1.795, 3.278, 1.848, 3.254, 3.886},
         -3.565143980596288, 7.066002357887578, 0.009014424199111791},
        {{-0.571, 0.110, -1.248},
         {-4.695, -2.721, -3.099, -2.067, -2.028},
         3.762135985249075, 5.905114924861449, 0.009655321048377666},
        {{0.006, 0.181, 0.880},
         {-0.670, 1.570, -0.628, 0.828, -0.027, -1.141, -1.319, 1.201},
         0.8031055380608998, 8.526264957413918, 0.44372399966016607},
        {{-0.457, -1.216, 0.732, -0.982, 1.782},
         {-1.741, -0.523, -1.128, 0.397, -0.656, -1.661, -1.312},
         1.454596887349339, 6.022078722999042, 0.19584003971942257},
    };
    return fixtures;
}

}  // namespace testsupport
