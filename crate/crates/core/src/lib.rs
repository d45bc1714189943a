pub mod exactfield;
pub mod pathalg;
pub mod repmod;
pub mod extconf;
pub mod funcat;
pub mod defectcore;
pub mod shell;
