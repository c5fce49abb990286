use record_walk::analytic::DriftParams;
use record_walk::series::WalkSeries;

use crate::args::{SeriesArgs, SeriesEmit};
use crate::output::{clamp_probability, Table};
use crate::CliError;

pub fn run(args: &SeriesArgs) -> Result<Table, CliError> {
    let params = DriftParams::new(args.c, args.sigma)?;
    let s = WalkSeries::gaussian(params, args.order);
    let side = args.side.into();
    let coeffs: Vec<f64> = match args.emit {
        SeriesEmit::Q => s.survival(side).coeffs().to_vec(),
        SeriesEmit::F => s.first_passage(side).coeffs().to_vec(),
        SeriesEmit::Mean => s.mean_records.coeffs().to_vec(),
        SeriesEmit::Rate => s.record_rate.coeffs().to_vec(),
        SeriesEmit::Pi => {
            let m = args.m.expect("clap requires --m with --emit pi") as usize;
            s.record_distributions()
                .nth(m - 1)
                .expect("the iterator is unbounded")
                .into_coeffs()
        }
    };
    let probability = args.emit != SeriesEmit::Mean;
    let mut t = Table::new(&["n", "value"]);
    for (n, v) in coeffs.into_iter().enumerate() {
        let v = if probability { clamp_probability(v) } else { v };
        t.push(vec![n.into(), v.into()]);
    }
    Ok(t)
}
