#pragma once

// The published MOD list: odd moduli below 5000, ordered so the most
// efficient filters come first. Shipped verbatim as the default filter
// order for verification runs.

#include <array>

#include "essieve/arith.hpp"

namespace ess {

inline constexpr std::array<u64, 583> kDefaultModList = {
    3, 5, 7, 11, 13, 17, 19, 23, 4495, 2491, 2627, 4661,
    4223, 1505, 4355, 3355, 4509, 4775, 2629, 4565, 4599, 4585, 3955, 3535,
    3857, 3115, 3419, 3949, 3395, 3353, 1391, 1199, 3775, 4325, 4031, 2799,
    1639, 4475, 2159, 4795, 2961, 1727, 4075, 1791, 4743, 2849, 3595, 1115,
    3445, 3263, 2155, 2065, 2515, 2681, 4195, 3223, 2519, 4103, 3731, 4345,
    3743, 2439, 1055, 2951, 1799, 4193, 1991, 3047, 2933, 3951, 4147, 1631,
    2219, 4615, 3913, 3679, 1535, 2959, 1655, 4123, 1439, 3839, 1319, 3695,
    4255, 3895, 1351, 2495, 1835, 2855, 2335, 4529, 1917, 1079, 1559, 1735,
    1679, 2165, 4367, 4555, 2359, 2723, 3065, 3899, 3295, 3035, 4927, 3359,
    4437, 3635, 4315, 2735, 3241, 4319, 4105, 4069, 1039, 4059, 1247, 3095,
    4571, 3665, 1007, 1583, 4895, 1847, 2435, 1765, 2807, 3647, 1343, 2651,
    3965, 1511, 2655, 4403, 1151, 887, 2935, 3545, 2879, 1967, 2815, 2399,
    4419, 1159, 4487, 3119, 1223, 2039, 4745, 2305, 1103, 4077, 3215, 3715,
    2279, 4915, 4873, 1031, 1475, 3865, 2483, 1399, 1823, 3173, 3305, 2241,
    3985, 3563, 1349, 1259, 3959, 4415, 3455, 2615, 1487, 3599, 3935, 1759,
    3505, 1871, 4879, 4535, 3199, 2045, 1367, 1493, 1919, 3787, 2111, 1975,
    2053, 4739, 1231, 4151, 1837, 1213, 3655, 2183, 4135, 4939, 1019, 3023,
    3995, 1855, 4265, 4079, 3983, 2575, 1063, 2351, 4985, 2687, 3167, 2447,
    2725, 4631, 4595, 4115, 4175, 4055, 4679, 1013, 2239, 4385, 1091, 3429,
    1909, 1719, 2365, 3415, 3079, 4955, 1147, 1133, 3191, 3475, 2759, 4405,
    2207, 4765, 3431, 1139, 4471, 2727, 4145, 3247, 1279, 1751, 3755, 1087,
    4835, 1733, 4645, 1979, 4711, 1177, 1073, 3055, 3239, 2999, 2087, 4855,
    4039, 1703, 3527, 4295, 4799, 4207, 4505, 1187, 1109, 1567, 1379, 2119,
    2911, 2591, 2015, 3785, 1651, 3155, 1819, 4751, 3719, 4735, 2345, 2831,
    2099, 4995, 1427, 2059, 1333, 1069, 1663, 2719, 2063, 4285, 2231, 1093,
    1607, 1423, 1411, 1027, 3805, 1769, 1121, 1903, 4063, 4759, 1363, 1973,
    4715, 2663, 3863, 1433, 2479, 4703, 3299, 1451, 2339, 1613, 1471, 1619,
    3671, 2287, 2367, 3845, 3537, 1591, 3733, 4463, 1271, 1931, 4619, 2903,
    2135, 4921, 4685, 4705, 1003, 1429, 1193, 4067, 3275, 4311, 1327, 3015,
    1499, 2413, 1237, 1181, 4045, 4081, 3605, 3779, 3103, 2837, 1579, 3439,
    1033, 3799, 2333, 1829, 1241, 4393, 2357, 4159, 2699, 3791, 2453, 3625,
    2579, 4945, 4127, 1649, 4741, 4871, 1667, 2177, 3835, 1043, 3407, 4919,
    4885, 2267, 2693, 2507, 4967, 2327, 4639, 1691, 1549, 2583, 1123, 1717,
    1999, 1807, 1933, 4553, 1049, 3479, 1553, 1853, 2543, 4343, 1501, 2743,
    3699, 1787, 3989, 1129, 1525, 4445, 1675, 1993, 1301, 2273, 1217, 1843,
    4003, 2411, 3245, 3401, 1117, 1789, 3379, 3901, 1831, 1957, 4085, 1507,
    1987, 3373, 3893, 1621, 1943, 3937, 1291, 1543, 1571, 2143, 2533, 2767,
    3253, 4883, 2551, 2833, 1229, 1877, 1949, 2009, 4391, 1643, 2251, 2729,
    3915, 1907, 2243, 2603, 2669, 2897, 3043, 3313, 3739, 1171, 1361, 1817,
    1879, 2659, 3623, 4283, 4859, 1537, 2003, 2161, 2389, 2869, 4439, 1099,
    1415, 2269, 2293, 2943, 3233, 3967, 4181, 4261, 4559, 4699, 1447, 1895,
    1921, 2195, 2939, 3293, 3565, 3607, 3749, 4247, 4591, 4829, 1157, 1417,
    1951, 1997, 2179, 2225, 2619, 2785, 3041, 3717, 4583, 4783, 4887, 1283,
    1517, 1721, 1747, 1961, 2033, 2117, 2129, 2741, 2803, 2893, 3161, 3589,
    3613, 1211, 1273, 1459, 1483, 1811, 1867, 1889, 1971, 2043, 2069, 2149,
    2213, 2423, 2709, 2779, 3013, 3149, 3551, 4013, 4097, 4363, 4399, 4589,
    4681, 1021, 1097, 1145, 1197, 1297, 1373, 1397, 1555, 1609, 1723, 1773,
    1777, 1783, 1801, 2123, 2191, 2259, 2291, 2371, 2407, 2443, 2671, 2845,
    3389, 3493, 3725, 4021, 4171, 4351, 4999,
};

// The seven wheel primes of the production run.
inline constexpr std::array<u64, 7> kDefaultWheelPrimes = {5, 7, 11, 13, 17, 19, 23};

} // namespace ess
