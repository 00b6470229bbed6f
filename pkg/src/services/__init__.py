# DDE fixed point services: evaluation, catalog, selection, sweeps and the oracle
