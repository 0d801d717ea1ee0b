//! Runs probes against a provider with bounded concurrency.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use cxn_core::probe::{build_prompt, Answer, Probe, Transcript};

use crate::provider::{CompletionProvider, DecodeParams, ProviderError, Request};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    /// Delay before the first retry; doubled for each further retry.
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub concurrency: usize,
    pub params: DecodeParams,
    pub retry: RetryPolicy,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            concurrency: 1,
            params: DecodeParams::default(),
            retry: RetryPolicy::default(),
        }
    }
}

/// Outcome of one probe: its transcript, and the error that ended it when
/// every attempt failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub transcript: Transcript,
    pub failure: Option<ProviderError>,
}

fn run_one(provider: &dyn CompletionProvider, probe: &Probe, opts: &RunOptions) -> Outcome {
    let prompt = build_prompt(probe);
    let request = Request {
        probe_id: &probe.probe_id,
        prompt: &prompt,
        params: opts.params,
    };
    let started = Instant::now();
    let mut retries = 0;
    let result = loop {
        match provider.send(&request) {
            Ok(text) => break Ok(text),
            Err(ProviderError::Transient(_)) if retries < opts.retry.max_retries => {
                thread::sleep(opts.retry.base_delay * 2u32.pow(retries));
                retries += 1;
            }
            Err(e) => break Err(e),
        }
    };
    let latency_ms = started.elapsed().as_millis() as u64;
    let (mut transcript, failure) = match result {
        Ok(text) => (
            Transcript::from_response(&probe.probe_id, &provider.id(), &text),
            None,
        ),
        Err(e) => {
            let mut t = Transcript::from_response(&probe.probe_id, &provider.id(), "");
            t.parsed_choice = Answer::Unparseable;
            t.rationale = e.to_string();
            (t, Some(e))
        }
    };
    transcript.latency_ms = latency_ms;
    transcript.retries = retries;
    Outcome {
        transcript,
        failure,
    }
}

/// Sends every probe as its own request, at most `concurrency` at a time.
/// Results come back in probe order.
pub fn run(provider: &dyn CompletionProvider, probes: &[Probe], opts: &RunOptions) -> Vec<Outcome> {
    let workers = opts.concurrency.clamp(1, probes.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Outcome>>> = probes.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(probe) = probes.get(i) else { break };
                let outcome = run_one(provider, probe, opts);
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(outcome);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| {
            s.into_inner()
                .unwrap_or_else(|e| e.into_inner())
                .expect("every probe is visited once")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::provider::StubProvider;
    use cxn_core::probe::{ExpressionDef, Options, ProbeKind};

    fn probes(n: usize) -> Vec<Probe> {
        (0..n)
            .map(|i| Probe {
                probe_id: format!("p{i}"),
                kind: ProbeKind::Reasoning,
                expressions: vec![ExpressionDef {
                    expression: format!("expr {i}"),
                    meaning: "m".into(),
                    usage: "u".into(),
                }],
                question: "q".into(),
                options: Options::new("Yes", "No", "not enough information"),
                gold: Answer::C,
                synthetic: true,
            })
            .collect()
    }

    fn fast() -> RunOptions {
        RunOptions {
            concurrency: 4,
            retry: RetryPolicy {
                max_retries: 3,
                base_delay: Duration::ZERO,
            },
            ..RunOptions::default()
        }
    }

    #[test]
    fn stub_echo_for_ten_probes() {
        let stub = StubProvider::constant("stub", "C\nExplanation: not enough to go on.");
        let out = run(&stub, &probes(10), &fast());
        assert_eq!(out.len(), 10);
        assert!(out.iter().all(|o| o.transcript.parsed_choice == Answer::C));
        let ids: Vec<_> = out.iter().map(|o| o.transcript.probe_id.clone()).collect();
        assert_eq!(ids, (0..10).map(|i| format!("p{i}")).collect::<Vec<_>>());
    }

    #[test]
    fn retries_then_succeeds() {
        let stub = StubProvider::new("flaky", |_, n| {
            if n < 2 {
                Err(ProviderError::Transient("reset".into()))
            } else {
                Ok("Answer: B".into())
            }
        });
        let out = run(&stub, &probes(1), &fast());
        assert_eq!(out[0].transcript.parsed_choice, Answer::B);
        assert_eq!(out[0].transcript.retries, 2);
        assert!(out[0].failure.is_none());
    }

    #[test]
    fn gives_up_after_three_retries() {
        let stub = StubProvider::new("down", |_, _| {
            Err(ProviderError::Transient("connection refused".into()))
        });
        let out = run(&stub, &probes(2), &fast());
        for o in &out {
            assert_eq!(o.transcript.parsed_choice, Answer::Unparseable);
            assert_eq!(o.transcript.retries, 3);
            assert!(o.transcript.rationale.contains("connection refused"));
        }
    }

    #[test]
    fn permanent_errors_are_not_retried() {
        let stub = StubProvider::new("bad", |_, _| {
            Err(ProviderError::Permanent("HTTP 401".into()))
        });
        let out = run(&stub, &probes(1), &fast());
        assert_eq!(out[0].transcript.retries, 0);
        assert_eq!(
            out[0].failure,
            Some(ProviderError::Permanent("HTTP 401".into()))
        );
    }

    #[test]
    fn requests_carry_only_their_own_probe() {
        let ps = probes(8);
        let stub = StubProvider::new("fp", |r, _| Ok(format!("A\n{}", r.prompt.len())));
        let out = run(&stub, &ps, &fast());
        for (p, o) in ps.iter().zip(&out) {
            assert_eq!(o.transcript.rationale, build_prompt(p).len().to_string());
        }
    }

    #[test]
    fn in_flight_requests_are_bounded() {
        use std::sync::Arc;
        let live = Arc::new(AtomicUsize::new(0));
        let peak = Arc::new(AtomicUsize::new(0));
        let (l, pk) = (live.clone(), peak.clone());
        let stub = StubProvider::new("slow", move |_, _| {
            let now = l.fetch_add(1, Ordering::SeqCst) + 1;
            pk.fetch_max(now, Ordering::SeqCst);
            thread::sleep(Duration::from_millis(5));
            l.fetch_sub(1, Ordering::SeqCst);
            Ok("C".into())
        });
        let mut opts = fast();
        opts.concurrency = 3;
        run(&stub, &probes(12), &opts);
        assert!(peak.load(Ordering::SeqCst) <= 3);
    }
}
