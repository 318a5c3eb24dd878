//! Line-oriented operation scripts.
//!
//! ```text
//! # comment
//! insert 5        rank drawn from the seeded policy
//! insert 5 3      forced integer rank
//! delete 5
//! search 5
//! split 5         keys <= 5 stay on the low side
//! catenate        joins the two sides again
//! dump
//! ```
//!
//! While a split is pending, insert, delete and search go to the side that
//! owns the key, and `dump` prints the low side and then the high side.

use std::fmt::Write as _;

use thiserror::Error;
use ziptree::{catenate, split, DeleteOutcome, InsertOutcome, Rank, RankPolicy, Strategy, ZipTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Insert { key: i64, rank: Option<u32> },
    Delete(i64),
    Search(i64),
    Split(i64),
    Catenate,
    Dump,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

/// Ordered commands, each with its 1-based source line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpScript {
    pub commands: Vec<(usize, Command)>,
}

impl OpScript {
    pub fn parse(text: &str) -> Result<OpScript, ParseError> {
        let mut commands = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| ParseError { line, message };
            let words: Vec<&str> = body.split_whitespace().collect();
            let int = |w: &str| {
                w.parse::<i64>()
                    .map_err(|_| err(format!("expected an integer key, got {w:?}")))
            };
            let arity = |n: usize| {
                if words.len() == n + 1 {
                    Ok(())
                } else {
                    Err(err(format!(
                        "{} takes {n} argument(s), got {}",
                        words[0],
                        words.len() - 1
                    )))
                }
            };
            let cmd = match words[0] {
                "insert" => match words.len() {
                    2 => Command::Insert {
                        key: int(words[1])?,
                        rank: None,
                    },
                    3 => Command::Insert {
                        key: int(words[1])?,
                        rank: Some(
                            words[2]
                                .parse::<u32>()
                                .map_err(|_| err(format!("expected a non-negative rank, got {:?}", words[2])))?,
                        ),
                    },
                    n => {
                        return Err(err(format!(
                            "insert takes a key and an optional rank, got {} argument(s)",
                            n - 1
                        )))
                    }
                },
                "delete" => {
                    arity(1)?;
                    Command::Delete(int(words[1])?)
                }
                "search" => {
                    arity(1)?;
                    Command::Search(int(words[1])?)
                }
                "split" => {
                    arity(1)?;
                    Command::Split(int(words[1])?)
                }
                "catenate" => {
                    arity(0)?;
                    Command::Catenate
                }
                "dump" => {
                    arity(0)?;
                    Command::Dump
                }
                other => return Err(err(format!("unknown command {other:?}"))),
            };
            commands.push((line, cmd));
        }
        Ok(OpScript { commands })
    }
}

struct Workspace {
    low: ZipTree<i64, ()>,
    /// Split key and high side of a pending split.
    high: Option<(i64, ZipTree<i64, ()>)>,
}

impl Workspace {
    fn side(&mut self, key: i64) -> &mut ZipTree<i64, ()> {
        match &mut self.high {
            Some((at, high)) if key > *at => high,
            _ => &mut self.low,
        }
    }
}

/// Runs `script` and returns its output: one line per command, with dumps
/// as single-line JSON shapes. Fails only on a rank-generation error.
pub fn run_trace(script: &OpScript, strategy: Strategy, seed: u64) -> Result<String, ziptree::TreeError> {
    let mut ws = Workspace {
        low: ZipTree::new(RankPolicy::stored(seed)),
        high: None,
    };
    let mut out = String::new();
    for &(_, cmd) in &script.commands {
        match cmd {
            Command::Insert { key, rank } => {
                let tree = ws.side(key);
                let outcome = match rank {
                    Some(r) => tree.insert_ranked(key, (), Rank::integer(r), strategy),
                    None => tree.insert_with(key, (), strategy)?,
                };
                match outcome {
                    InsertOutcome::Inserted(st) => {
                        let rank = tree.rank_of(&key).expect("just inserted");
                        writeln!(
                            out,
                            "insert {key} rank={rank} inserted path_nodes={} link_writes={}",
                            st.path_nodes, st.link_writes
                        )
                    }
                    InsertOutcome::AlreadyPresent(()) => writeln!(out, "insert {key} present"),
                }
            }
            Command::Delete(key) => match ws.side(key).delete_with(&key, strategy) {
                DeleteOutcome::Deleted((), st) => writeln!(
                    out,
                    "delete {key} deleted path_nodes={} link_writes={}",
                    st.path_nodes, st.link_writes
                ),
                DeleteOutcome::NotFound => writeln!(out, "delete {key} not-found"),
            },
            Command::Search(key) => {
                let r = ws.side(key).search(&key);
                let found = if r.value.is_some() { "found" } else { "absent" };
                writeln!(out, "search {key} {found} visited={}", r.nodes_visited)
            }
            Command::Split(key) => {
                if ws.high.is_some() {
                    writeln!(out, "split {key} ignored: a split is pending")
                } else {
                    let whole = std::mem::replace(&mut ws.low, ZipTree::new(RankPolicy::stored(seed)));
                    let (low, high) = split(whole, &key);
                    writeln!(out, "split {key} low={} high={}", low.len(), high.len()).ok();
                    ws.low = low;
                    ws.high = Some((key, high));
                    Ok(())
                }
            }
            Command::Catenate => match ws.high.take() {
                None => writeln!(out, "catenate ignored: nothing to join"),
                Some((_, mut high)) => {
                    let (joined, st) =
                        catenate(&mut ws.low, &mut high).expect("split sides are disjoint and share a policy");
                    ws.low = joined;
                    writeln!(out, "catenate size={} link_writes={}", ws.low.len(), st.link_writes)
                }
            },
            Command::Dump => {
                writeln!(out, "{}", ws.low.shape().to_json()).ok();
                match &ws.high {
                    Some((_, high)) => writeln!(out, "{}", high.shape().to_json()),
                    None => Ok(()),
                }
            }
        }
        .expect("writing to a String cannot fail");
    }
    Ok(out)
}
