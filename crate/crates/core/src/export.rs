//! CSV export. Every file starts with `# key=value` metadata lines followed
//! by a header row.

use std::io::{self, Write};

use crate::estimators::ConvergenceTrace;
use crate::models::QueueTrace;
use crate::renewal::RenewalPath;
use crate::reward::RewardedPath;

fn write_meta<W: Write>(w: &mut W, meta: &[(&str, String)]) -> io::Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

/// `n,S_n` for `n = 1..=K+1`; the last row is the overshoot epoch.
pub fn write_path_csv<W: Write>(w: &mut W, path: &RenewalPath, meta: &[(&str, String)]) -> io::Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "# seed={}", path.seed())?;
    writeln!(w, "# stream={}", path.stream())?;
    writeln!(w, "# horizon={}", path.horizon())?;
    writeln!(w, "# overshoot_index={}", path.renewals() + 1)?;
    writeln!(w, "n,S_n")?;
    for (i, s) in path.all_epochs().iter().enumerate() {
        writeln!(w, "{},{s}", i + 1)?;
    }
    Ok(())
}

/// `n,S_n,x_n,r_n,coeff_n`; `coeff_n` is empty when the cycle has none.
pub fn write_rewarded_path_csv<W: Write>(w: &mut W, rp: &RewardedPath, meta: &[(&str, String)]) -> io::Result<()> {
    let path = rp.path();
    write_meta(w, meta)?;
    writeln!(w, "# sampler={}", rp.sampler())?;
    writeln!(w, "# seed={}", path.seed())?;
    writeln!(w, "# stream={}", path.stream())?;
    writeln!(w, "# horizon={}", path.horizon())?;
    writeln!(w, "# overshoot_index={}", path.renewals() + 1)?;
    writeln!(w, "n,S_n,x_n,r_n,coeff_n")?;
    for (i, (s, c)) in path.all_epochs().iter().zip(rp.cycles()).enumerate() {
        let coeff = c.coeff.map(|v| v.to_string()).unwrap_or_default();
        writeln!(w, "{},{s},{},{},{coeff}", i + 1, c.length, c.reward)?;
    }
    Ok(())
}

/// Long-format `checkpoint,value`.
pub fn write_trace_csv<W: Write>(w: &mut W, trace: &ConvergenceTrace, meta: &[(&str, String)]) -> io::Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "checkpoint,value")?;
    for (c, v) in trace.checkpoints.iter().zip(&trace.values) {
        writeln!(w, "{c},{v}")?;
    }
    Ok(())
}

/// `customer,arrival,service_start,departure,sojourn,cycle_id`.
pub fn write_queue_csv<W: Write>(w: &mut W, trace: &QueueTrace, meta: &[(&str, String)]) -> io::Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "# seed={}", trace.seed)?;
    writeln!(w, "customer,arrival,service_start,departure,sojourn,cycle_id")?;
    for (i, c) in trace.customers.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            i + 1,
            c.arrival,
            c.service_start,
            c.departure,
            c.sojourn,
            c.cycle_id
        )?;
    }
    Ok(())
}
