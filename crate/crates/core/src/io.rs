//! JSON formats for instances, schedules and tree decompositions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::explorers::TreeDecomposition;
use crate::graph::{Instance, TemporalGraph};
use crate::presence::PresencePattern;
use crate::walk::{MultiAgentSchedule, TemporalWalk};

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum PresenceJson {
    Always,
    Steps { steps: Vec<usize> },
    Intervals { intervals: Vec<(usize, usize)> },
    Periodic { offset: usize, present: usize, absent: usize },
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: usize,
    v: usize,
    presence: PresenceJson,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    start: usize,
    lifetime: usize,
    edges: Vec<EdgeJson>,
}

impl From<&PresencePattern> for PresenceJson {
    fn from(p: &PresencePattern) -> Self {
        match p {
            PresencePattern::Always => PresenceJson::Always,
            PresencePattern::Steps(s) => PresenceJson::Steps {
                steps: s.iter().collect(),
            },
            PresencePattern::Intervals(iv) => PresenceJson::Intervals {
                intervals: iv.clone(),
            },
            &PresencePattern::Periodic {
                offset,
                present,
                absent,
            } => PresenceJson::Periodic {
                offset,
                present,
                absent,
            },
        }
    }
}

impl From<PresenceJson> for PresencePattern {
    fn from(p: PresenceJson) -> Self {
        match p {
            PresenceJson::Always => PresencePattern::Always,
            PresenceJson::Steps { steps } => PresencePattern::steps(steps),
            PresenceJson::Intervals { intervals } => PresencePattern::Intervals(intervals),
            PresenceJson::Periodic {
                offset,
                present,
                absent,
            } => PresencePattern::Periodic {
                offset,
                present,
                absent,
            },
        }
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    let g = &inst.graph;
    let doc = InstanceJson {
        n: g.n(),
        start: inst.start,
        lifetime: g.lifetime(),
        edges: g
            .edges()
            .iter()
            .zip(g.patterns())
            .map(|(e, p)| EdgeJson {
                u: e.u,
                v: e.v,
                presence: p.into(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("instance serialises")
}

pub fn instance_from_json(s: &str) -> Result<Instance> {
    let doc: InstanceJson = serde_json::from_str(s)?;
    let edges = doc
        .edges
        .into_iter()
        .map(|e| (e.u, e.v, e.presence.into()))
        .collect();
    let g = TemporalGraph::new(doc.n, edges, doc.lifetime)?;
    Instance::new(g, doc.start)
}

pub fn schedule_to_json(s: &MultiAgentSchedule) -> String {
    serde_json::to_string(s).expect("schedule serialises")
}

pub fn schedule_from_json(s: &str) -> Result<MultiAgentSchedule> {
    Ok(serde_json::from_str(s)?)
}

pub fn walk_to_json(w: &TemporalWalk) -> String {
    schedule_to_json(&MultiAgentSchedule::single(w.clone()))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    std::fs::write(path, instance_to_json(inst))?;
    Ok(())
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<MultiAgentSchedule> {
    schedule_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_schedule(path: impl AsRef<Path>, s: &MultiAgentSchedule) -> Result<()> {
    std::fs::write(path, schedule_to_json(s))?;
    Ok(())
}

pub fn decomposition_to_json(td: &TreeDecomposition) -> String {
    serde_json::to_string(td).expect("decomposition serialises")
}

pub fn decomposition_from_json(s: &str) -> Result<TreeDecomposition> {
    Ok(serde_json::from_str(s)?)
}

pub fn read_decomposition(path: impl AsRef<Path>) -> Result<TreeDecomposition> {
    decomposition_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_decomposition(path: impl AsRef<Path>, td: &TreeDecomposition) -> Result<()> {
    std::fs::write(path, decomposition_to_json(td))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_layout() {
        let g = TemporalGraph::new(
            3,
            vec![
                (0, 1, PresencePattern::Always),
                (1, 2, PresencePattern::steps([1, 4])),
                (
                    0,
                    2,
                    PresencePattern::Periodic {
                        offset: 1,
                        present: 1,
                        absent: 2,
                    },
                ),
            ],
            9,
        )
        .unwrap();
        let inst = Instance::new(g, 2).unwrap();
        let s = instance_to_json(&inst);
        assert_eq!(
            s,
            r#"{"n":3,"start":2,"lifetime":9,"edges":[{"u":0,"v":1,"presence":{"type":"always"}},{"u":1,"v":2,"presence":{"type":"steps","steps":[1,4]}},{"u":0,"v":2,"presence":{"type":"periodic","offset":1,"present":1,"absent":2}}]}"#
        );
        assert_eq!(instance_to_json(&instance_from_json(&s).unwrap()), s);
    }

    #[test]
    fn schedule_layout() {
        let s = r#"{"agents":[{"start":0,"moves":[[0,1],[3,2]]},{"start":0,"moves":[]}]}"#;
        let sch = schedule_from_json(s).unwrap();
        assert_eq!(sch.agents[0].moves[1].step, 3);
        assert_eq!(schedule_to_json(&sch), s);
    }

    #[test]
    fn intervals_json() {
        let s = r#"{"n":2,"start":0,"lifetime":20,"edges":[{"u":0,"v":1,"presence":{"type":"intervals","intervals":[[0,3],[10,20]]}}]}"#;
        let inst = instance_from_json(s).unwrap();
        assert!(!inst.graph.is_present(0, 5));
        assert_eq!(instance_to_json(&inst), s);
    }

    #[test]
    fn decomposition_layout() {
        let s = r#"{"bags":[[0,1,2],[1,2,3]],"tree":[[0,1]]}"#;
        let td = decomposition_from_json(s).unwrap();
        assert_eq!(td.width(), 2);
        assert_eq!(decomposition_to_json(&td), s);
    }
}
