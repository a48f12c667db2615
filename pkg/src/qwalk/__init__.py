"""Signless-Laplacian continuous-time quantum walks on Q-graphs of regular graphs."""

__version__ = "0.1.0"

from .errors import InputError, PreconditionError, QWalkError
from .graph_core import (
    Graph,
    RegularityInfo,
    from_edge_list,
    generate,
    incidence,
    line_graph,
    q_graph,
    regularity,
    signless_laplacian,
)
from .spectra import SpectralDecomposition, decompose, strong_cospectrality, support
from .qgraph_forms import QGraphSpectrum, closed_form_spectrum, kernel_basis, qpm
from .walk import amplitude, amplitude_oracle, fidelity_scan, qgraph_amplitude
from .transfer import (
    PGSTWitness,
    PSTCertificate,
    certify_pst,
    qgraph_no_pst_verdict,
    search_pgst_time,
)

__all__ = [
    "__version__",
    "QWalkError",
    "InputError",
    "PreconditionError",
    "Graph",
    "RegularityInfo",
    "from_edge_list",
    "generate",
    "incidence",
    "line_graph",
    "q_graph",
    "regularity",
    "signless_laplacian",
    "SpectralDecomposition",
    "decompose",
    "support",
    "strong_cospectrality",
    "QGraphSpectrum",
    "closed_form_spectrum",
    "kernel_basis",
    "qpm",
    "amplitude",
    "amplitude_oracle",
    "qgraph_amplitude",
    "fidelity_scan",
    "PSTCertificate",
    "PGSTWitness",
    "certify_pst",
    "qgraph_no_pst_verdict",
    "search_pgst_time",
]
