use bezea::indicators::igdx;
use bezea::mm_bezea::{run as mm_run, MmBezEaConfig};
use bezea::problems::Problem;

fn main() {
    let problem: Problem<f64> = Problem::make("MinDist", 2).unwrap();
    let refset = problem.reference_set(5000);
    let config = MmBezEaConfig::<f64> { budget: 20_000, ..Default::default() };
    for seed in 1..3u64 {
        let out = mm_run(&problem, &config, seed);
        println!("== seed {seed}: elites={} restarts={}", out.archive.len(), out.record.restarts);
        for set in &out.record.final_sets {
            let interp = set.interpolate(1000);
            let mut best = f64::INFINITY;
            for id in 0..refset.num_niches() {
                let niche = refset.niche(id);
                let v = igdx(&interp, &niche).unwrap();
                best = best.min(v);
            }
            println!(
                "  ctrl={:?} hv={:.4} L={:.6} igdx={:.4} niche_flags={:?}",
                set.control_points.iter().map(|p| (p[0]*100.0).round()/100.0).zip(
                    set.control_points.iter().map(|p| (p[1]*100.0).round()/100.0)).map(|(a,b)|(a,b)).collect::<Vec<_>>(),
                set.hv, set.constraint, best, set.same_niche_as
            );
        }
    }
}
