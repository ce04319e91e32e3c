//! Shipped data fixtures.

use crate::error::Result;
use crate::population::ConstituencyPartition;

/// EU27 member state populations in thousands, 1 January 2011 (Eurostat,
/// rounded). A stand-in for experiments on a realistic, skewed partition;
/// order: DE FR UK IT ES PL RO NL GR BE PT CZ HU SE AT BG DK SK FI IE LT LV
/// SI EE CY LU MT.
pub const EU27_POPULATIONS_THOUSANDS: [u64; 27] = [
    81_752, 65_076, 62_436, 60_626, 46_153, 38_530, 21_414, 16_656, 11_310, 10_952, 10_637,
    10_533, 9_986, 9_416, 8_404, 7_505, 5_561, 5_435, 5_375, 4_481, 3_245, 2_230, 2_050,
    1_340, 804, 512, 417,
];

/// EU27 fixture as constituencies of `population / 1000`, rounded to odd sizes.
pub fn eu27_partition() -> Result<ConstituencyPartition> {
    let pops: Vec<f64> = EU27_POPULATIONS_THOUSANDS.iter().map(|&p| p as f64).collect();
    ConstituencyPartition::from_populations(&pops, 1.0)
}
