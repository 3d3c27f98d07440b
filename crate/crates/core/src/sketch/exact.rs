use serde::{Deserialize, Serialize};

use crate::coloring::{greedy_color_ascending, Coloring};
use crate::error::SketchError;
use crate::graph::Graph;
use crate::sketch::ColoringSketch;
use crate::stream::{EdgeOp, EdgeToken};

/// Stores every edge it sees and answers with ascending greedy.
///
/// Deletions of edges it never saw are ignored, so it colors exactly the
/// net graph of its own window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactBufferSketch {
    graph: Graph,
}

impl ExactBufferSketch {
    pub fn new(n: usize) -> Self {
        ExactBufferSketch { graph: Graph::new(n) }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl ColoringSketch for ExactBufferSketch {
    fn process(&mut self, t: EdgeToken) -> Result<(), SketchError> {
        t.edge.check_range(self.graph.n())?;
        match t.op {
            EdgeOp::Insert => self.graph.insert(t.edge),
            EdgeOp::Delete => self.graph.remove(t.edge),
        };
        Ok(())
    }

    fn query(&mut self) -> Result<Coloring, SketchError> {
        Ok(greedy_color_ascending(&self.graph))
    }

    fn space_proxy(&self) -> usize {
        self.graph.edge_count() + self.graph.n()
    }

    fn window_graph(&self) -> Option<&Graph> {
        Some(&self.graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{count_colors, is_proper};

    #[test]
    fn triangle_and_window_deletes() {
        let mut s = ExactBufferSketch::new(4);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            s.process(EdgeToken::insert(u, v).unwrap()).unwrap();
        }
        // A delete of an edge from before the window is a no-op.
        s.process(EdgeToken::delete(2, 3).unwrap()).unwrap();
        let c = s.query().unwrap();
        assert!(is_proper(&c, s.graph()));
        assert_eq!(count_colors(&c), 3);
        assert_eq!(s.space_proxy(), 3 + 4);
    }
}
