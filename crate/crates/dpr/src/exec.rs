//! Sandboxed execution of generated programs: temporary working
//! directory, piped graph text on stdin, wall-clock timeout enforced by
//! polling, and a slot limit bounding concurrent child processes.

use std::io::Write as _;
use std::process::{Command, Stdio};
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExecStatus {
    Exited(i32),
    TimedOut,
    SpawnFailed(String),
}

#[derive(Clone, Debug)]
pub struct ExecOutput {
    pub status: ExecStatus,
    pub stdout: String,
    pub stderr: String,
    pub elapsed: Duration,
}

const POLL_INTERVAL: Duration = Duration::from_millis(25);

/// Counting semaphore bounding concurrent external executions.
pub struct ProcessSlots {
    available: Mutex<usize>,
    signal: Condvar,
}

impl ProcessSlots {
    pub fn new(slots: usize) -> Self {
        ProcessSlots {
            available: Mutex::new(slots.max(1)),
            signal: Condvar::new(),
        }
    }

    pub fn acquire(&self) -> SlotGuard<'_> {
        let mut available = self.available.lock().expect("slot lock");
        while *available == 0 {
            available = self.signal.wait(available).expect("slot wait");
        }
        *available -= 1;
        SlotGuard { slots: self }
    }
}

pub struct SlotGuard<'a> {
    slots: &'a ProcessSlots,
}

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        let mut available = self.slots.available.lock().expect("slot lock");
        *available += 1;
        self.slots.signal.notify_one();
    }
}

/// Writes the program and graph into a fresh temp dir, runs the command
/// template (placeholders `{program}` and `{graph}`), pipes the graph text
/// to stdin, and kills the child once the timeout elapses. All files live
/// inside the temp dir and are removed when it drops.
pub fn run_sandboxed(
    program_text: &str,
    graph_text: &str,
    command_template: &str,
    timeout: Duration,
) -> ExecOutput {
    let started = Instant::now();
    let fail = |msg: String| ExecOutput {
        status: ExecStatus::SpawnFailed(msg),
        stdout: String::new(),
        stderr: String::new(),
        elapsed: started.elapsed(),
    };
    let dir = match tempfile::TempDir::new() {
        Ok(dir) => dir,
        Err(e) => return fail(format!("tempdir: {e}")),
    };
    let program_path = dir.path().join("program.py");
    let graph_path = dir.path().join("graph.txt");
    if let Err(e) = std::fs::write(&program_path, program_text) {
        return fail(format!("write program: {e}"));
    }
    if let Err(e) = std::fs::write(&graph_path, graph_text) {
        return fail(format!("write graph: {e}"));
    }

    let tokens: Vec<String> = command_template
        .split_whitespace()
        .map(|tok| {
            tok.replace("{program}", &program_path.display().to_string())
                .replace("{graph}", &graph_path.display().to_string())
        })
        .collect();
    let Some((exe, args)) = tokens.split_first() else {
        return fail("empty command template".into());
    };

    let mut child = match Command::new(exe)
        .args(args)
        .current_dir(dir.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(child) => child,
        Err(e) => return fail(format!("spawn {exe}: {e}")),
    };

    // Graph text is tiny; write it fully and close the pipe.
    if let Some(mut stdin) = child.stdin.take() {
        let _ = stdin.write_all(graph_text.as_bytes());
    }
    let stdout_handle = child.stdout.take().map(|mut pipe| {
        std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = std::io::Read::read_to_string(&mut pipe, &mut buf);
            buf
        })
    });
    let stderr_handle = child.stderr.take().map(|mut pipe| {
        std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = std::io::Read::read_to_string(&mut pipe, &mut buf);
            buf
        })
    });

    let deadline = started + timeout;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break ExecStatus::Exited(status.code().unwrap_or(-1)),
            Ok(None) => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    break ExecStatus::TimedOut;
                }
                std::thread::sleep(POLL_INTERVAL);
            }
            Err(e) => {
                let _ = child.kill();
                break ExecStatus::SpawnFailed(format!("wait: {e}"));
            }
        }
    };
    let stdout = stdout_handle
        .and_then(|h| h.join().ok())
        .unwrap_or_default();
    let stderr = stderr_handle
        .and_then(|h| h.join().ok())
        .unwrap_or_default();
    ExecOutput {
        status,
        stdout,
        stderr,
        elapsed: started.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_program_reads_stdin() {
        let out = run_sandboxed(
            "import sys\nprint(sys.stdin.readline().strip())",
            "undirected unweighted n=2\n0 1\n",
            "python3 {program}",
            Duration::from_secs(10),
        );
        assert_eq!(out.status, ExecStatus::Exited(0));
        assert_eq!(out.stdout.trim(), "undirected unweighted n=2");
    }

    #[test]
    fn sleeping_program_times_out() {
        let started = Instant::now();
        let out = run_sandboxed(
            "import time\ntime.sleep(30)",
            "",
            "python3 {program}",
            Duration::from_millis(400),
        );
        assert_eq!(out.status, ExecStatus::TimedOut);
        // killed within the timeout plus a small number of poll intervals
        assert!(started.elapsed() < Duration::from_secs(5));
    }

    #[test]
    fn bad_interpreter_is_spawn_failure() {
        let out = run_sandboxed(
            "print(1)",
            "",
            "definitely-not-an-interpreter {program}",
            Duration::from_secs(1),
        );
        assert!(matches!(out.status, ExecStatus::SpawnFailed(_)));
    }

    #[test]
    fn slots_bound_concurrency() {
        let slots = std::sync::Arc::new(ProcessSlots::new(2));
        let active = std::sync::Arc::new(Mutex::new((0usize, 0usize))); // (current, peak)
        let mut handles = Vec::new();
        for _ in 0..6 {
            let slots = slots.clone();
            let active = active.clone();
            handles.push(std::thread::spawn(move || {
                let _guard = slots.acquire();
                {
                    let mut state = active.lock().unwrap();
                    state.0 += 1;
                    state.1 = state.1.max(state.0);
                }
                std::thread::sleep(Duration::from_millis(30));
                active.lock().unwrap().0 -= 1;
            }));
        }
        for handle in handles {
            handle.join().unwrap();
        }
        assert!(active.lock().unwrap().1 <= 2);
    }
}
