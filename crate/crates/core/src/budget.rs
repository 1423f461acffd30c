//! Global worker budget shared by κ-scans and sweeps.

use std::sync::OnceLock;

use rayon::ThreadPool;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "LGQ_THREADS";

/// Workers allowed by `LGQ_THREADS`, else the available parallelism.
pub fn worker_budget() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// The process-wide pool. Dense kernels run sequentially inside it so the
/// only parallel axis is the one the caller distributes over.
pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        faer::set_global_parallelism(faer::Par::Seq);
        rayon::ThreadPoolBuilder::new()
            .num_threads(worker_budget())
            .thread_name(|i| format!("lgq-worker-{i}"))
            .build()
            .expect("worker pool")
    })
}
