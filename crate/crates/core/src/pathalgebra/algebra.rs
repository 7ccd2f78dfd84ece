use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactmath::Field;

pub type VertexId = usize;
pub type PathId = usize;

/// Default cap on the number of enumerated paths (admissibility bound).
pub const DEFAULT_PATH_BOUND: usize = 10_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// Raw quiver-with-relations input, as read from an algebra JSON file.
/// Relations are arrow-name sequences in composition order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Presentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub relations: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
struct ArrowInfo {
    name: String,
    from: VertexId,
    to: VertexId,
}

#[derive(Clone, Debug)]
struct PathInfo {
    /// Arrow ids in traversal order; empty for the lazy paths `e_v`.
    arrows: Vec<usize>,
    from: VertexId,
    to: VertexId,
}

/// A loaded algebra: presentation, the finite basis of nonzero paths, and the
/// coefficient field of the session.
#[derive(Debug)]
pub struct Algebra {
    field: Field,
    vertices: Vec<String>,
    arrows: Vec<ArrowInfo>,
    paths: Vec<PathInfo>,
    /// Traversal-order relation words.
    relations: Vec<Vec<usize>>,
    /// `slots[from][to]`: ids of the nonzero paths from `from` to `to`,
    /// ordered by length then enumeration order (deterministic).
    slots: Vec<Vec<Vec<PathId>>>,
    lookup: HashMap<Vec<usize>, PathId>,
    max_path_len: usize,
}

impl Algebra {
    /// Enumerates all nonzero paths by breadth-first extension, discarding
    /// words that contain a relation as a consecutive subword.  Fails if the
    /// enumeration exceeds `bound` (non-admissible presentation).
    pub fn load(presentation: &Presentation, field: Field, bound: usize) -> Result<Algebra, Error> {
        if presentation.vertices.is_empty() {
            return Err(Error::Algebra("no vertices".into()));
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in presentation.vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::Algebra(format!("duplicate vertex {v:?}")));
            }
        }
        let mut arrow_index = HashMap::new();
        let mut arrows = Vec::new();
        for (i, a) in presentation.arrows.iter().enumerate() {
            let from = *vertex_index
                .get(&a.from)
                .ok_or_else(|| Error::Algebra(format!("arrow {:?}: unknown vertex {:?}", a.name, a.from)))?;
            let to = *vertex_index
                .get(&a.to)
                .ok_or_else(|| Error::Algebra(format!("arrow {:?}: unknown vertex {:?}", a.name, a.to)))?;
            if arrow_index.insert(a.name.clone(), i).is_some() {
                return Err(Error::Algebra(format!("duplicate arrow {:?}", a.name)));
            }
            arrows.push(ArrowInfo {
                name: a.name.clone(),
                from,
                to,
            });
        }

        let mut relations = Vec::new();
        for rel in &presentation.relations {
            if rel.len() < 2 {
                return Err(Error::Algebra(format!(
                    "relation {rel:?} has length {} < 2",
                    rel.len()
                )));
            }
            // Composition order in the file; traversal order internally.
            let mut word: Vec<usize> = Vec::with_capacity(rel.len());
            for name in rel.iter().rev() {
                let id = *arrow_index
                    .get(name)
                    .ok_or_else(|| Error::Algebra(format!("relation references unknown arrow {name:?}")))?;
                word.push(id);
            }
            for pair in word.windows(2) {
                if arrows[pair[0]].to != arrows[pair[1]].from {
                    return Err(Error::Algebra(format!("relation {rel:?} is not composable")));
                }
            }
            relations.push(word);
        }

        let n = presentation.vertices.len();
        let mut paths: Vec<PathInfo> = Vec::new();
        let mut lookup = HashMap::new();
        // BFS over words; the empty word is per-vertex, so length-0 paths are
        // seeded explicitly and only nonempty words go through `lookup`.
        let mut frontier: Vec<PathId> = Vec::new();
        for v in 0..n {
            paths.push(PathInfo {
                arrows: Vec::new(),
                from: v,
                to: v,
            });
            frontier.push(paths.len() - 1);
        }
        while !frontier.is_empty() {
            let mut next_frontier = Vec::new();
            for &pid in &frontier {
                for (aid, arrow) in arrows.iter().enumerate() {
                    if arrow.from != paths[pid].to {
                        continue;
                    }
                    let mut word = paths[pid].arrows.clone();
                    word.push(aid);
                    if has_relation_suffix(&word, &relations) {
                        continue;
                    }
                    if paths.len() >= bound {
                        return Err(Error::NonAdmissible { bound });
                    }
                    let info = PathInfo {
                        from: paths[pid].from,
                        to: arrow.to,
                        arrows: word.clone(),
                    };
                    paths.push(info);
                    lookup.insert(word, paths.len() - 1);
                    next_frontier.push(paths.len() - 1);
                }
            }
            frontier = next_frontier;
        }

        let max_path_len = paths.iter().map(|p| p.arrows.len()).max().unwrap_or(0);
        let mut slots = vec![vec![Vec::new(); n]; n];
        for (pid, p) in paths.iter().enumerate() {
            slots[p.from][p.to].push(pid);
        }

        Ok(Algebra {
            field,
            vertices: presentation.vertices.clone(),
            arrows,
            paths,
            relations,
            slots,
            lookup,
            max_path_len,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, Error> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownLabel(format!("vertex {name:?}")))
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn path_source(&self, p: PathId) -> VertexId {
        self.paths[p].from
    }

    pub fn path_target(&self, p: PathId) -> VertexId {
        self.paths[p].to
    }

    pub fn path_len(&self, p: PathId) -> usize {
        self.paths[p].arrows.len()
    }

    pub fn max_path_len(&self) -> usize {
        self.max_path_len
    }

    /// The identity path `e_v`.
    pub fn identity_path(&self, v: VertexId) -> PathId {
        // Length-0 paths were seeded first, one per vertex, in order.
        v
    }

    /// Nonzero paths from `from` to `to`, in a stable order.
    pub fn paths_between(&self, from: VertexId, to: VertexId) -> &[PathId] {
        &self.slots[from][to]
    }

    /// `dim Hom_Λ(P_i, P_j)`.  Under the left-module convention this is the
    /// number of nonzero quiver paths `j -> i`.
    pub fn hom_dimension(&self, i: VertexId, j: VertexId) -> usize {
        self.paths_between(j, i).len()
    }

    /// Basis path ids of `Hom_Λ(P_from, P_to)` for summand vertices.
    pub fn morphism_basis(&self, from: VertexId, to: VertexId) -> &[PathId] {
        self.paths_between(to, from)
    }

    /// Path composition `first . then` in traversal order (`first` acts
    /// first); `None` when the concatenation hits a relation.
    pub fn concat(&self, first: PathId, then: PathId) -> Option<PathId> {
        let a = &self.paths[first];
        let b = &self.paths[then];
        assert_eq!(a.to, b.from, "paths are not composable");
        if a.arrows.is_empty() {
            return Some(then);
        }
        if b.arrows.is_empty() {
            return Some(first);
        }
        let mut word = a.arrows.clone();
        word.extend_from_slice(&b.arrows);
        if contains_relation(&word, &self.relations) {
            return None;
        }
        Some(*self.lookup.get(&word).expect("relation-free word was enumerated"))
    }

    /// Displays a path as a word in composition order (`e_v` for identities).
    pub fn path_display(&self, p: PathId) -> String {
        let info = &self.paths[p];
        if info.arrows.is_empty() {
            format!("e_{}", self.vertices[info.from])
        } else {
            info.arrows
                .iter()
                .rev()
                .map(|&a| self.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Arrow-name word of a path in composition order, for serialization.
    pub fn path_word(&self, p: PathId) -> Vec<String> {
        self.paths[p]
            .arrows
            .iter()
            .rev()
            .map(|&a| self.arrows[a].name.clone())
            .collect()
    }

    /// Resolves a composition-order arrow word to a path id; `None` if the
    /// word is killed by a relation.  Errors on unknown arrows or words that
    /// do not compose.  The empty word resolves to `e_{at}`.
    pub fn resolve_word(&self, word: &[String], at: Option<VertexId>) -> Result<Option<PathId>, Error> {
        if word.is_empty() {
            let v = at.ok_or_else(|| Error::Parse("empty path word with no anchor vertex".into()))?;
            return Ok(Some(self.identity_path(v)));
        }
        let mut traversal = Vec::with_capacity(word.len());
        for name in word.iter().rev() {
            let id = self
                .arrows
                .iter()
                .position(|a| &a.name == name)
                .ok_or_else(|| Error::UnknownLabel(format!("arrow {name:?}")))?;
            traversal.push(id);
        }
        for pair in traversal.windows(2) {
            if self.arrows[pair[0]].to != self.arrows[pair[1]].from {
                return Err(Error::Parse(format!("path {word:?} does not compose")));
            }
        }
        if contains_relation(&traversal, &self.relations) {
            return Ok(None);
        }
        Ok(Some(
            *self
                .lookup
                .get(&traversal)
                .expect("relation-free word was enumerated"),
        ))
    }
}

fn has_relation_suffix(word: &[usize], relations: &[Vec<usize>]) -> bool {
    relations
        .iter()
        .any(|rel| word.len() >= rel.len() && word[word.len() - rel.len()..] == rel[..])
}

fn contains_relation(word: &[usize], relations: &[Vec<usize>]) -> bool {
    relations
        .iter()
        .any(|rel| word.windows(rel.len()).any(|w| w == rel.as_slice()))
}
