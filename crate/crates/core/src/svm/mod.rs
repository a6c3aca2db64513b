//! Multiclass support vector machine (one-vs-one, SMO-trained).

mod io;
mod kernel;
mod model;
mod oracle;
mod smo;

pub use io::{load_svm, read_svm, save_svm, write_svm, SVM_FORMAT_VERSION, SVM_MAGIC};
pub use kernel::{gram_matrix, kernel_eval, Kernel, KernelKind};
pub use model::{predict, train_svm, PairMachine, Prediction, Standardizer, SvmModel, SvmParams};
pub use oracle::{brute_force_dual, DualSolution, MAX_ORACLE_SAMPLES};
pub use smo::{dual_objective, solve_binary, BinarySolution};
