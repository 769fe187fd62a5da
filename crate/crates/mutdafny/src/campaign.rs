//! Classifying many mutant files on a pool of worker threads.

use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::verifier::{Classifier, Verdict, VerifierError};

#[derive(Clone, Debug)]
pub struct Job {
    pub id: String,
    pub path: PathBuf,
}

/// Classifies every job once. Results come back in job order whatever the
/// worker count. A spawn failure stops the campaign.
pub fn run_campaign(
    jobs: &[Job],
    classifier: &dyn Classifier,
    workers: usize,
) -> Result<Vec<(String, Verdict)>, VerifierError> {
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let slots: Vec<Mutex<Option<Verdict>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let failure: Mutex<Option<VerifierError>> = Mutex::new(None);
    let workers = workers.clamp(1, jobs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                match classifier.classify(&job.id, &job.path) {
                    Ok(v) => *slots[i].lock().unwrap() = Some(v),
                    Err(e @ VerifierError::Spawn { .. }) => {
                        stop.store(true, Ordering::Relaxed);
                        failure.lock().unwrap().get_or_insert(e);
                    }
                    Err(e) => {
                        *slots[i].lock().unwrap() = Some(Verdict {
                            diagnostic: Some(e.to_string()),
                            ..Verdict::fixed(mutdafny_core::score::Status::Invalid)
                        })
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(jobs
        .iter()
        .zip(slots)
        .map(|(j, v)| (j.id.clone(), v.into_inner().unwrap().expect("every job classified")))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::StubVerdicts;
    use mutdafny_core::score::Status;

    fn jobs(n: usize) -> Vec<Job> {
        (0..n)
            .map(|i| Job {
                id: format!("BOR-{i}-1-1"),
                path: PathBuf::from(format!("{i}.dfy")),
            })
            .collect()
    }

    #[test]
    fn empty() {
        let stub = StubVerdicts::default();
        assert!(run_campaign(&[], &stub, 4).unwrap().is_empty());
    }

    #[test]
    fn stub_map_is_reproduced_for_any_worker_count() {
        let js = jobs(40);
        let mut stub = StubVerdicts::default();
        for (i, j) in js.iter().enumerate() {
            stub.insert(&j.id, Status::ALL[i % 4]);
        }
        let one = run_campaign(&js, &stub, 1).unwrap();
        let eight = run_campaign(&js, &stub, 8).unwrap();
        assert_eq!(one, eight);
        for (i, (id, v)) in one.iter().enumerate() {
            assert_eq!(id, &js[i].id);
            assert_eq!(v.status, Status::ALL[i % 4]);
        }
    }
}
