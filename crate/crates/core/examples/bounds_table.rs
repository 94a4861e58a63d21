//! Prints the SQL, SRM and Helstrom error rates of 16-QAM next to a
//! Monte Carlo estimate of the ideal PNRD receiver.

use qam_receiver::bounds::{helstrom_error_rate, sql_error_rate, srm_error_rate, HelstromOptions};
use qam_receiver::constellation::qam_for_ns;
use qam_receiver::montecarlo::estimate_ser;
use qam_receiver::receiver::{DetectorKind, ReceiverParams};

fn main() -> qam_receiver::Result<()> {
    let params = ReceiverParams::ideal(20, DetectorKind::PnrdInfinite);
    println!(
        "{:>4} {:>12} {:>12} {:>12} {:>12}",
        "ns", "sql", "srm", "helstrom", "adaptive"
    );
    for ns in [2.0, 6.0, 10.0, 14.0, 18.0] {
        let c = qam_for_ns(16, ns)?;
        let helstrom = helstrom_error_rate(&c, &HelstromOptions::default())?;
        let mc = estimate_ser(&c, &params, 100_000, 1)?;
        println!(
            "{ns:>4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            sql_error_rate(16, ns)?,
            srm_error_rate(&c)?,
            helstrom.p_err,
            mc.ser
        );
    }
    Ok(())
}
