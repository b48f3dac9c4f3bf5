use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for graph on {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },

    #[error("short-cycle enumeration exceeded the cap of {cap} cycles")]
    CycleBudgetExceeded { cap: usize },

    #[error("no admissible subset sizes for {vertices} vertices in this mode")]
    EmptyRange { vertices: usize },

    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: usize, degree: usize },

    #[error("edge function is missing edge ({u}, {v})")]
    MissingEdge { u: usize, v: usize },

    #[error(
        "retries exhausted after {retries} attempts: best support {best_support} of {non_bridges} non-bridge edges"
    )]
    RetriesExhausted {
        retries: usize,
        best_support: usize,
        non_bridges: usize,
    },

    #[error("linear system is singular")]
    Singular,

    #[error("residual {residual:e} above tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("eigensolver did not converge: {0}")]
    Eigen(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graft needs {leaves} attachment vertices but the base has {available}")]
    GraftTooSmall { leaves: usize, available: usize },

    #[error("vertex map is not injective: {0} has two preimages")]
    NotInjective(usize),

    #[error("not an isomorphism: pair ({x1}, {x2}) adjacency {in_x} maps to ({y1}, {y2}) adjacency {in_y}")]
    NotIsomorphic {
        x1: usize,
        x2: usize,
        y1: usize,
        y2: usize,
        in_x: bool,
        in_y: bool,
    },

    #[error("random generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("stage `{stage}`: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// The innermost error, with stage labels removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
