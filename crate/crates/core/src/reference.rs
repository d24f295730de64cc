//! Reference transmission/reflection values for the barrier
//! `BarrierParams::table1()`: `T` to 7 significant digits, `R` to 6.

use crate::model::BarrierParams;
use crate::scatter::{scan, MatchingMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint {
    pub energy: f64,
    pub transmission: f64,
    pub reflection: f64,
}

const fn p(energy: f64, transmission: f64, reflection: f64) -> ReferencePoint {
    ReferencePoint {
        energy,
        transmission,
        reflection,
    }
}

pub const TABLE1: [ReferencePoint; 20] = [
    p(0.005, 0.0992153, 0.900785),
    p(0.010, 0.0559170, 0.944083),
    p(0.015, 0.0411413, 0.958859),
    p(0.020, 0.0337481, 0.966252),
    p(0.025, 0.0293473, 0.970653),
    p(0.030, 0.0264526, 0.973547),
    p(0.035, 0.0244214, 0.975579),
    p(0.040, 0.0229305, 0.977069),
    p(0.045, 0.0217998, 0.978200),
    p(0.050, 0.0209209, 0.979079),
    p(0.055, 0.0202247, 0.979775),
    p(0.060, 0.0196651, 0.980335),
    p(0.065, 0.0192101, 0.980790),
    p(0.070, 0.0188371, 0.981163),
    p(0.075, 0.0185293, 0.981471),
    p(0.080, 0.0182742, 0.981726),
    p(0.085, 0.0180621, 0.981938),
    p(0.090, 0.0178858, 0.982114),
    p(0.095, 0.0177393, 0.982261),
    p(0.100, 0.0176180, 0.982382),
];

/// Energies of [`TABLE1`] in order.
pub fn table1_energies() -> Vec<f64> {
    TABLE1.iter().map(|p| p.energy).collect()
}

/// Agreement demanded between a computed row and the reference table.
pub const TABLE1_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct TableCheck {
    pub mode: MatchingMode,
    pub max_dt: f64,
    pub max_dr: f64,
    /// Energies that failed to solve or missed the table by more than
    /// [`TABLE1_TOL`].
    pub misses: Vec<f64>,
    /// First solver error, if any.
    pub error: Option<String>,
}

impl TableCheck {
    pub fn reproduced(&self) -> bool {
        self.misses.is_empty()
    }
}

/// Recomputes [`TABLE1`] in the given matching mode.
pub fn check_table1(mode: MatchingMode) -> TableCheck {
    let params = BarrierParams::table1();
    let results = scan(&table1_energies(), &params, mode).expect("reference grid is valid");
    let mut check = TableCheck {
        mode,
        max_dt: 0.0,
        max_dr: 0.0,
        misses: Vec::new(),
        error: None,
    };
    for (row, res) in TABLE1.iter().zip(results) {
        match res {
            Ok(r) => {
                let dt = (r.transmission - row.transmission).abs();
                let dr = (r.reflection - row.reflection).abs();
                check.max_dt = check.max_dt.max(dt);
                check.max_dr = check.max_dr.max(dr);
                if !(dt <= TABLE1_TOL && dr <= TABLE1_TOL) {
                    check.misses.push(row.energy);
                }
            }
            Err(e) => {
                check.misses.push(row.energy);
                check.error.get_or_insert_with(|| e.to_string());
                check.max_dt = f64::INFINITY;
                check.max_dr = f64::INFINITY;
            }
        }
    }
    check
}
