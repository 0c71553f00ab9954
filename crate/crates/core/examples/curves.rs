//! Ground-truth reward curves and the config syntax that describes them.

use rising_bandits::curves::RewardCurve;

fn main() -> rising_bandits::Result<()> {
    let curves: Vec<RewardCurve> = [
        "exponential 0.9 0.5 0.5",
        "power 0.95 0.3 1.5",
        "tabulated 0.2 0.5 0.6 0.65",
        "staircase 7 0.6 exponential 0.9 0.3 0.8",
    ]
    .iter()
    .map(|text| text.parse())
    .collect::<Result<_, _>>()?;

    for curve in &curves {
        let values: Vec<String> = curve.values(15).iter().map(|v| format!("{v:.3}")).collect();
        println!("{curve}");
        println!("  concave: {}, limit {:.3}", curve.is_concave(), curve.limit());
        println!("  r(1..=15) = {}", values.join(" "));
    }

    // pull counts start at 1
    assert!(curves[0].eval(0).is_err());
    Ok(())
}
