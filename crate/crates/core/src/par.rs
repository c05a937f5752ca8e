/// How independent tasks (replicates, enumeration roots) are scheduled.
///
/// Results are always returned in task-index order, so the choice never
/// changes any output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon, on a dedicated pool when `threads` is given. Falls back to
    /// sequential execution when the `parallel` feature is disabled.
    #[default]
    Parallel,
    Threads(usize),
}

impl Execution {
    /// `--jobs`-style selection: 1 means sequential, 0 means all cores.
    pub fn from_jobs(jobs: usize) -> Self {
        match jobs {
            0 => Execution::Parallel,
            1 => Execution::Sequential,
            t => Execution::Threads(t),
        }
    }

    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..count).map(f).collect(),
            Execution::Parallel => parallel_map(count, f, None),
            Execution::Threads(t) => parallel_map(count, f, Some(t)),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(count: usize, f: F, threads: Option<usize>) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let run = || (0..count).into_par_iter().map(&f).collect();
    match threads {
        None => run(),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(count: usize, f: F, _threads: Option<usize>) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
