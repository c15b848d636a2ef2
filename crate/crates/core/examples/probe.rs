use bezea::indicators::igdx;
use bezea::mm_bezea::{run as mm_run, MmBezEaConfig};
use bezea::problems::Problem;
use bezea::set_bezea::{run as set_run, SetBezEaConfig};

fn main() {
    let problem: Problem<f64> = Problem::make("MinDist", 2).unwrap();
    let refset = problem.reference_set(5000);
    println!("ref point: {:?}", problem.reference_point());
    let config = MmBezEaConfig::<f64> { budget: 20_000, ..Default::default() };
    for seed in 0..5u64 {
        let t = std::time::Instant::now();
        let out = mm_run(&problem, &config, seed);
        let mut igdx_per_elite = Vec::new();
        for set in &out.record.final_sets {
            let interp = set.interpolate(1000);
            // match to nearest niche
            let mut best = f64::INFINITY;
            for id in 0..refset.num_niches() {
                let niche = refset.niche(id);
                if niche.is_empty() { continue; }
                let v = igdx(&interp, &niche).unwrap();
                best = best.min(v);
            }
            igdx_per_elite.push(best);
        }
        println!(
            "mm seed {seed}: elites={} gens={} evals={} igdx={:?} time={:?}",
            out.archive.len(), out.record.generations, out.record.evaluations_used,
            igdx_per_elite.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
            t.elapsed()
        );
    }
    let sconfig = SetBezEaConfig::<f64> { budget: 20_000, ..Default::default() };
    for seed in 0..5u64 {
        let t = std::time::Instant::now();
        let out = set_run(&problem, &sconfig, seed);
        let rep = out.reported.as_ref().unwrap();
        println!(
            "set seed {seed}: b={} f0={:.4} f1={:.4} L={:.4} niches={:?} gens={} evals={} time={:?}",
            rep.curves.len(), rep.f0, rep.f1, rep.constraint, rep.niche_counts,
            out.record.generations, out.record.evaluations_used, t.elapsed()
        );
    }
}
