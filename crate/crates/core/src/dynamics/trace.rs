use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Algorithm;
use crate::error::{Error, Result};
use crate::game::ActionProfile;

pub const TRACE_HEADER: &str = "spectrum-game trace v1";

/// State after one iteration (standard) or contention round (autonomous).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    /// SAPs that changed their action this round; empty when the scheduled
    /// standard-BR user had nothing better.
    pub updaters: Vec<usize>,
    pub potential: i64,
    pub aggregate_interference: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsTrace {
    pub algorithm: Algorithm,
    pub initial: ActionProfile,
    pub initial_potential: i64,
    pub initial_aggregate_interference: u64,
    pub rounds: Vec<RoundRecord>,
    pub final_profile: ActionProfile,
    /// The dynamics stopped because no SAP could improve and the final
    /// profile passed the exhaustive equilibrium check.
    pub converged: bool,
    pub ne_verified: bool,
    pub rounds_to_convergence: usize,
}

impl DynamicsTrace {
    pub fn final_potential(&self) -> i64 {
        self.rounds
            .last()
            .map_or(self.initial_potential, |r| r.potential)
    }

    pub fn effective_rounds(&self) -> usize {
        self.rounds
            .iter()
            .filter(|r| !r.updaters.is_empty())
            .count()
    }

    /// Potential sequence over the initial profile and every effective
    /// round.
    pub fn effective_potentials(&self) -> Vec<i64> {
        std::iter::once(self.initial_potential)
            .chain(
                self.rounds
                    .iter()
                    .filter(|r| !r.updaters.is_empty())
                    .map(|r| r.potential),
            )
            .collect()
    }

    /// Strictly increasing potential across effective rounds, and unchanged
    /// potential across rounds without updaters.
    pub fn is_potential_monotone(&self) -> bool {
        let mut prev = self.initial_potential;
        for r in &self.rounds {
            let ok = if r.updaters.is_empty() {
                r.potential == prev
            } else {
                r.potential > prev
            };
            if !ok || r.aggregate_interference as i64 != -2 * r.potential {
                return false;
            }
            prev = r.potential;
        }
        true
    }

    /// Writes the trace as text. `preamble` lines are emitted as `# ` comments
    /// right after the header.
    ///
    /// ```text
    /// spectrum-game trace v1
    /// # <preamble...>
    /// algorithm autonomous
    /// converged true
    /// ne_verified true
    /// rounds_to_convergence 2
    /// initial_potential -9
    /// final_potential -4
    /// initial
    /// <profile block>
    /// rounds 2
    /// round updaters potential aggregate_interference
    /// 1 0,4,9 -6 12
    /// 2 3 -4 8
    /// final
    /// <profile block>
    /// ```
    ///
    /// A round without updaters writes `-` in the updater column.
    pub fn to_text(&self, preamble: &[String]) -> String {
        let mut out = String::new();
        writeln!(out, "{TRACE_HEADER}").unwrap();
        for line in preamble {
            writeln!(out, "# {line}").unwrap();
        }
        writeln!(out, "algorithm {}", self.algorithm).unwrap();
        writeln!(out, "converged {}", self.converged).unwrap();
        writeln!(out, "ne_verified {}", self.ne_verified).unwrap();
        writeln!(out, "rounds_to_convergence {}", self.rounds_to_convergence).unwrap();
        writeln!(out, "initial_potential {}", self.initial_potential).unwrap();
        writeln!(out, "final_potential {}", self.final_potential()).unwrap();
        writeln!(out, "initial").unwrap();
        out.push_str(&self.initial.to_text());
        writeln!(out, "rounds {}", self.rounds.len()).unwrap();
        writeln!(out, "round updaters potential aggregate_interference").unwrap();
        for r in &self.rounds {
            let updaters = if r.updaters.is_empty() {
                "-".to_string()
            } else {
                r.updaters
                    .iter()
                    .map(|u| u.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            writeln!(
                out,
                "{} {} {} {}",
                r.round, updaters, r.potential, r.aggregate_interference
            )
            .unwrap();
        }
        writeln!(out, "final").unwrap();
        out.push_str(&self.final_profile.to_text());
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut cursor = Cursor {
            lines: &lines,
            pos: 0,
        };

        let (line, header) = cursor.next()?;
        if header != TRACE_HEADER {
            return Err(Error::parse(line, format!("unsupported header {header:?}")));
        }
        let algorithm: Algorithm = cursor.keyed("algorithm")?;
        let converged: bool = cursor.keyed("converged")?;
        let ne_verified: bool = cursor.keyed("ne_verified")?;
        let rounds_to_convergence: usize = cursor.keyed("rounds_to_convergence")?;
        let initial_potential: i64 = cursor.keyed("initial_potential")?;
        let _final_potential: i64 = cursor.keyed("final_potential")?;
        cursor.expect("initial")?;
        let initial = cursor.profile()?;
        let n_rounds: usize = cursor.keyed("rounds")?;
        cursor.expect("round updaters potential aggregate_interference")?;
        let mut rounds = Vec::with_capacity(n_rounds);
        for _ in 0..n_rounds {
            let (line, l) = cursor.next()?;
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::parse(line, "round row needs four columns"));
            }
            let bad = |what: &str| Error::parse(line, format!("invalid {what}"));
            let updaters = if f[1] == "-" {
                Vec::new()
            } else {
                f[1].split(',')
                    .map(|u| u.parse().map_err(|_| bad("updater")))
                    .collect::<Result<Vec<usize>>>()?
            };
            rounds.push(RoundRecord {
                round: f[0].parse().map_err(|_| bad("round"))?,
                updaters,
                potential: f[2].parse().map_err(|_| bad("potential"))?,
                aggregate_interference: f[3].parse().map_err(|_| bad("aggregate"))?,
            });
        }
        cursor.expect("final")?;
        let final_profile = cursor.profile()?;
        Ok(DynamicsTrace {
            algorithm,
            initial_aggregate_interference: (-2 * initial_potential) as u64,
            initial,
            initial_potential,
            rounds,
            final_profile,
            converged,
            ne_verified,
            rounds_to_convergence,
        })
    }
}

struct Cursor<'a> {
    lines: &'a [(usize, &'a str)],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Result<(usize, &'a str)> {
        let item = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::parse(0, "unexpected end of trace"))?;
        self.pos += 1;
        Ok(item)
    }

    fn expect(&mut self, literal: &str) -> Result<()> {
        let (line, l) = self.next()?;
        if l == literal {
            Ok(())
        } else {
            Err(Error::parse(line, format!("expected {literal:?}")))
        }
    }

    fn keyed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, l) = self.next()?;
        l.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(line, format!("expected `{key} <value>`")))
    }

    /// A profile block: header line, `cells N`, then N action lines.
    fn profile(&mut self) -> Result<ActionProfile> {
        let start = self.pos;
        let (line, l) = self.next()?;
        let count: usize = match self.lines.get(self.pos) {
            Some((_, c)) => c
                .strip_prefix("cells ")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::parse(line, format!("bad profile block after {l:?}")))?,
            None => return Err(Error::parse(line, "truncated profile block")),
        };
        let end = self.pos + 1 + count;
        if end > self.lines.len() {
            return Err(Error::parse(line, "truncated profile block"));
        }
        let block: String = self.lines[start..end]
            .iter()
            .map(|(_, l)| format!("{l}\n"))
            .collect();
        self.pos = end;
        ActionProfile::from_text(&block)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run_to_convergence, ContentionConfig};
    use crate::game::GameInstance;
    use crate::topology::generate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_text_round_trip() {
        let t = generate(15, &[1, 2, 3], 200.0, 20, 60.0, 5).unwrap();
        let g = GameInstance::new(t, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = g.random_profile(&mut rng);
        for alg in [Algorithm::Standard, Algorithm::Autonomous] {
            let trace =
                run_to_convergence(&g, &p, alg, &ContentionConfig::default(), &mut rng, 10_000)
                    .unwrap();
            let text = trace.to_text(&["seed 1".to_string()]);
            assert!(text.contains("\n# seed 1\n"));
            let back = DynamicsTrace::from_text(&text).unwrap();
            assert_eq!(back, trace);
            assert_eq!(back.to_text(&["seed 1".to_string()]), text);
        }
    }

    #[test]
    fn monotonicity_detects_violations() {
        let p = ActionProfile::new(vec![]);
        let mut trace = DynamicsTrace {
            algorithm: Algorithm::Standard,
            initial: p.clone(),
            initial_potential: -3,
            initial_aggregate_interference: 6,
            rounds: vec![
                RoundRecord {
                    round: 1,
                    updaters: vec![0],
                    potential: -2,
                    aggregate_interference: 4,
                },
                RoundRecord {
                    round: 2,
                    updaters: vec![],
                    potential: -2,
                    aggregate_interference: 4,
                },
            ],
            final_profile: p,
            converged: true,
            ne_verified: true,
            rounds_to_convergence: 2,
        };
        assert!(trace.is_potential_monotone());
        assert_eq!(trace.effective_potentials(), vec![-3, -2]);
        trace.rounds[1].potential = -1;
        assert!(!trace.is_potential_monotone());
        trace.rounds[1].updaters = vec![1];
        trace.rounds[1].aggregate_interference = 2;
        assert!(trace.is_potential_monotone());
        trace.rounds[1].potential = -2;
        trace.rounds[1].aggregate_interference = 4;
        assert!(!trace.is_potential_monotone());
    }
}
