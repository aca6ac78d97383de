//! Long-running exhaustive search with checkpointing.
//!
//! `cargo run --release -p aont-core --example stretch -- TI TO S Q SECS CHECKPOINT`

use std::path::PathBuf;
use std::time::Duration;

use aont_core::search::{prove_nonexistence, Budget, SearchConfig};
use aont_core::AontParams;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: u64| args.get(i).and_then(|a| a.parse().ok()).unwrap_or(d);
    let p = AontParams::new(num(0, 2) as usize, num(1, 5) as usize, num(2, 9) as usize, num(3, 2) as u32)
        .expect("valid parameters");
    let mut cfg = SearchConfig::exhaustive(p);
    cfg.use_bounds = std::env::var_os("NO_BOUNDS").is_none();
    cfg.budget = Budget { max_nodes: None, max_time: Some(Duration::from_secs(num(4, 3600))) };
    cfg.checkpoint_path = args.get(5).map(PathBuf::from);
    cfg.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let out = prove_nonexistence(&cfg).expect("search runs");
    println!("{}", serde_json::to_string_pretty(&out.to_json()).unwrap());
}
