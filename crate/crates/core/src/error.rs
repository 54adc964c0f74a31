use std::fmt;

/// Boundary edge of the rectangular domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    West,
    North,
    South,
    East,
}

impl Edge {
    /// Outward unit normal of the edge.
    pub fn outward_normal(self) -> [f64; 2] {
        match self {
            Edge::West => [-1.0, 0.0],
            Edge::East => [1.0, 0.0],
            Edge::North => [0.0, 1.0],
            Edge::South => [0.0, -1.0],
        }
    }

    pub fn letter(self) -> char {
        match self {
            Edge::West => 'W',
            Edge::North => 'N',
            Edge::South => 'S',
            Edge::East => 'E',
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Edge::West => "west",
            Edge::North => "north",
            Edge::South => "south",
            Edge::East => "east",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("insufficient data for degree {degree}: {points} points")]
    InsufficientData { points: usize, degree: usize },
    #[error("unsorted abscissae at index {index}")]
    UnsortedAbscissae { index: usize },
    #[error("invalid spline degree {0}")]
    InvalidDegree(usize),
    #[error("length mismatch: {abscissae} abscissae, {ordinates} ordinates")]
    LengthMismatch { abscissae: usize, ordinates: usize },
    #[error("non-finite spline data")]
    NonFiniteData,
    #[error("basis index out of range: k = {k}, degree = {degree}, {knots} knots")]
    BasisIndexOutOfRange { k: usize, degree: usize, knots: usize },
    #[error("collocation singular at row {row}")]
    CollocationSingular { row: usize },

    #[error("unknown builtin case '{0}'")]
    UnknownCase(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("degenerate f from generator at ({x}, {y})")]
    DegenerateGenerator { x: f64, y: f64 },

    #[error("invalid outward normal ({0}, {1})")]
    InvalidNormal(f64, f64),
    #[error("initial strip not free (t = 0) at y = {y}")]
    StripNotFree { y: f64 },
    #[error("horizontal strip not free (r = 0) at x = {x}")]
    HorizontalStripNotFree { x: f64 },
    #[error("degenerate prescription: {0}")]
    DegeneratePrescription(&'static str),
    #[error("missing boundary condition at edge {edge} (x = {x}, y = {y})")]
    MissingBoundaryCondition { edge: Edge, x: f64, y: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("solver diverged at x = {x}")]
    Diverged { x: f64 },
    #[error("hyperbolicity lost at ({x}, {y}): a = b")]
    HyperbolicityLost { x: f64, y: f64 },
    #[error("trace start outside domain: ({x}, {y})")]
    TraceStartOutside { x: f64, y: f64 },

    #[error("unsupported Gauss-Legendre point count {0} (1..=5)")]
    UnsupportedQuadrature(usize),
    #[error("hyperbolicity lost in residual evaluation")]
    ResidualHyperbolicityLost,
    #[error("cell ({i}, {j}) is not interior")]
    NotInterior { i: usize, j: usize },
    #[error("grid too small for residual evaluation: {n_x} x {n_y}")]
    GridTooSmall { n_x: usize, n_y: usize },

    #[error("exact solution unavailable for case '{0}'")]
    ExactUnavailable(String),
    #[error("cannot take log of non-positive error")]
    NonPositiveError,
    #[error("order fit needs at least 3 entries, got {0}")]
    TooFewEntries(usize),
    #[error("h_y must strictly decrease across convergence entries")]
    NonDecreasingStep,
}

pub type Result<T> = std::result::Result<T, Error>;
