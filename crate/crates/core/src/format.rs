//! JSON document format for decomposition graphs.
//!
//! ```json
//! {"vertices": [{"id": "v1", "g": 0, "fibres": [[2, 1], [2, 1]], "b": 0}],
//!  "edges": [{"id": "e1", "from": "v1", "to": "v1", "matrix": [[1, 2], [1, 1]]}]}
//! ```
//!
//! All numbers are integers and unknown keys are rejected. Serialization
//! writes vertices and edges in id order, so parse/serialize is canonical.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gl2z::Gl2Matrix;
use crate::graph::DecompositionGraph;
use crate::seifert::{Fibre, SeifertData};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    g: i64,
    #[serde(default)]
    fibres: Vec<Fibre>,
    b: i64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    from: String,
    to: String,
    matrix: Gl2Matrix,
}

impl DecompositionGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text)?;
        let mut builder = DecompositionGraph::builder();
        for v in doc.vertices {
            builder = builder.vertex(v.id, SeifertData::new(v.g, v.fibres, v.b)?);
        }
        for e in doc.edges {
            builder = builder.edge(e.id, e.from, e.to, e.matrix);
        }
        builder.build()
    }

    fn to_document(&self) -> Document {
        Document {
            vertices: self
                .vertices()
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), g: v.data.g(), fibres: v.data.fibres().to_vec(), b: v.data.b() })
                .collect(),
            edges: self
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: self.vertices()[e.from].id.clone(),
                    to: self.vertices()[e.to].id.clone(),
                    matrix: e.matrix,
                })
                .collect(),
        }
    }

    /// One vertex or edge per line, in id order.
    pub fn to_json(&self) -> String {
        fn items<T: Serialize>(xs: &[T]) -> String {
            let lines: Vec<String> =
                xs.iter().map(|x| format!("    {}", serde_json::to_string(x).expect("plain data"))).collect();
            if lines.is_empty() {
                "[]".into()
            } else {
                format!("[\n{}\n  ]", lines.join(",\n"))
            }
        }
        let doc = self.to_document();
        format!("{{\n  \"vertices\": {},\n  \"edges\": {}\n}}", items(&doc.vertices), items(&doc.edges))
    }
}
