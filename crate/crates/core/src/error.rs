use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("map is not well defined on cosets: {0}")]
    IllDefinedMap(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("word is not in the {0}-th lower central series term")]
    NotInGammaK(usize),
    #[error("tensor is not a Lie element: {0}")]
    NotALieElement(String),
    #[error("map is not in the Johnson filtration at degree {0}")]
    NotInJk(usize),
    #[error("map is not in the Johnson-Levine filtration at degree {0}")]
    NotInJkL(usize),
    #[error("longitude of strand {strand} is not in the {degree}-th lower central series term")]
    LongitudeDegreeTooLow { strand: usize, degree: usize },
    #[error("element is not in the image of eta: {0}")]
    NotInImage(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("strut record is not of the form (0 Id; Id Delta): {0}")]
    BadStrutRecord(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
