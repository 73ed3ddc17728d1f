pub mod fps;
pub mod hyper;
pub mod numerics;
pub mod poly;
pub mod transforms;
pub mod translate;
pub mod catalog;
pub mod binsplit;
pub mod special;
