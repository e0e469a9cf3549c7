//! Cardinality bounds and separation margins, and the `K`, `M` they imply.

use sinr_linksched::mwisl::{
    auto_margin, optsize_bound_linear, optsize_bound_uniform, separation_margin_linear_raw,
    separation_margin_uniform_raw, NoiseExponent,
};
use sinr_linksched::{PowerModel, SinrParams};

fn main() -> sinr_linksched::Result<()> {
    let sp = SinrParams::new(1.0, 3.0, 1.0, 1e-4, 1.0, 5.0)?;
    let linear = PowerModel::Linear {
        c: 1.0,
        beta: 2.0,
        p_max: 25.0,
    };
    let uniform = PowerModel::Uniform { p: 1.0 };

    println!(" J | linear ub  raw M | uniform ub  raw M");
    for j in 1..=4 {
        let lu = optsize_bound_linear(&sp, &linear, j, 0.8, NoiseExponent::default())?;
        let uu = optsize_bound_uniform(&sp, j)?;
        println!(
            "{j:>2} | {lu:>9} {:>6.2} | {uu:>10} {:>6.2}",
            separation_margin_linear_raw(&sp, &linear, lu, 0.8)?,
            separation_margin_uniform_raw(&sp, 1.0, uu, 0.9)?,
        );
    }
    // The two noise-term forms coincide at r = 1.
    let sp2 = SinrParams::new(1.0, 3.0, 1.0, 1e-2, 2.0, 5.0)?;
    for e in [NoiseExponent::KappaMinusBeta, NoiseExponent::BetaMinusKappa] {
        println!(
            "r = 2, xi = 0.01, J = 1, {e:?}: {}",
            optsize_bound_linear(&sp2, &linear, 1, 0.8, e)?
        );
    }

    for (name, pm, eps) in [("linear", linear, 0.8), ("uniform", uniform, 0.9)] {
        let free = auto_margin(&sp, &pm, eps, None, NoiseExponent::default())?;
        let fixed = auto_margin(&sp, &pm, eps, Some(free.k + 20), NoiseExponent::default())?;
        println!(
            "{name}: derived {free:?}; with K = {}: {fixed:?}",
            free.k + 20
        );
    }
    Ok(())
}
