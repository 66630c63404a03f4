use qaoa_maxcut::graph;
use qaoa_maxcut::qaoa::{AngleSchedule, Simulator};
use qaoa_maxcut::rng::stream;
use std::time::Instant;

fn main() {
    let n = 20;
    let mut rng = stream(1, "bench", n as u64);
    let g = graph::regular(n, 3, &mut rng, 10_000).unwrap();
    let sim = Simulator::new(&g, 26).unwrap();
    let angles = AngleSchedule::random(8, &mut rng);
    let mut session = sim.session();
    let mut best = f64::INFINITY;
    for _ in 0..15 {
        let t = Instant::now();
        let _ = session.objective(&angles);
        best = best.min(t.elapsed().as_secs_f64());
    }
    println!("session objective min {:.1} ms", best * 1e3);
}
