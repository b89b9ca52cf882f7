"""Python surface of the hawkeslab simulation library."""

from _hawkeslab import (  # noqa: F401
    DisplacementSpec,
    RngStream,
    __version__,
    grow_kesten,
    occupation_curve,
    palm_local_finiteness_scan,
    palm_mean_measure,
    renewal_function,
    run_config,
    simulate_family,
    simulate_inar,
    simulate_renewal_hawkes,
    symmetrized_lattice_step,
    two_index_mean,
)
