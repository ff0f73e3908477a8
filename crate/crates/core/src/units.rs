/// CODATA 2018 Hartree energy in electron volts.
pub const HARTREE_TO_EV: f64 = 27.211386245988;

pub fn hartree_to_ev(e: f64) -> f64 {
    e * HARTREE_TO_EV
}
