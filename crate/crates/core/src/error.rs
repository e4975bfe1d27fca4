use crate::tri::Dart;

/// Errors produced by parsing, construction and move operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("tetrahedron index {tet} out of range (have {tets})")]
    TetOutOfRange { tet: usize, tets: usize },

    #[error("not a permutation of 0123: {0:?}")]
    BadPermutation([u8; 4]),

    #[error("face glued to itself: tet {0} face {1}")]
    SelfGluedFace(usize, u8),

    #[error("gluing of tet {0} face {1} is not involutive")]
    NonInvolutive(usize, u8),

    #[error("gluing permutation of tet {0} face {1} does not carry the face onto the partner face")]
    FaceMismatch(usize, u8),

    #[error("unknown edge class {0}")]
    UnknownEdge(usize),

    #[error("edge class {0} is not layerable: {1}")]
    NotLayerable(usize, String),

    #[error("fold rejected: face {0:?} is not on the boundary")]
    FoldNotBoundary(Dart),

    #[error("fold rejected: would glue a face to itself")]
    FoldSelfFace,

    #[error("fold rejected: edge class {0} would be identified with itself reversing orientation")]
    FoldReversesEdge(usize),

    #[error("edge class {0} does not join two distinct vertices")]
    NotVertexJoining(usize),

    #[error("triangulation does not have exactly two vertices (has {0})")]
    NotTwoVertices(usize),

    #[error("crush rejected: tet {tet} meets the edge in slots {slots:?}, which do not flatten")]
    BadDoubleIncidence { tet: usize, slots: Vec<usize> },

    #[error("crush rejected: face dart {0:?} has repeated edge classes (cone or dunce hat image)")]
    DegenerateFace(Dart),

    #[error("crush rejected: identification chain starting at {0:?} closes up on itself")]
    ChainClosedOnSelf(Dart),

    #[error("crush rejected: identification chains are inconsistent at {0:?}")]
    ChainInconsistent(Dart),

    #[error("crush rejected: no tetrahedra would remain")]
    CrushAnnihilates,

    #[error("triangulation with boundary where a closed one is required")]
    NotClosed,

    #[error("triangulation is not connected")]
    Disconnected,

    #[error("cocycle condition violated around edge class {0}")]
    CocycleViolation(usize),

    #[error("cocycle value vector has wrong length (expected {expected}, got {got})")]
    CocycleLength { expected: usize, got: usize },

    #[error("cover does not have exactly two vertices (has {0})")]
    CoverNotTwoVertices(usize),

    #[error("cover base does not have exactly one vertex (has {0})")]
    BaseNotOneVertex(usize),

    #[error("quad arcs do not match across tet {0} face {1}")]
    ArcMismatch(usize, u8),

    #[error("quad in tet {0} has no matching arc across face {1}")]
    UnmatchedArc(usize, u8),

    #[error("quad selection has wrong length (expected {expected}, got {got})")]
    SelectionLength { expected: usize, got: usize },

    #[error("labels do not match this triangulation: {0}")]
    StaleLabels(String),

    #[error("census size {0} out of range (1..=4)")]
    CensusRange(usize),

    #[error("census size 4 requires the long-running flag")]
    CensusNeedsFlag,

    #[error("bad signature string: {0}")]
    BadSignature(String),

    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
