pub mod algebra;
pub mod error;
pub mod filtration;
pub mod instances;
pub mod report;
pub mod valuation;
pub mod skeleton;
pub mod claims;
pub mod replay;
pub mod document;
pub mod cli;
