//! DIMACS cnf front end.
pub struct Placeholder;
