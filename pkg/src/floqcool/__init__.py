"""Dissipative cooling and transport in Floquet spin chains.

Subpackages
-----------
``gaussian``    covariance-matrix (matchgate) engine
``dense``       exact statevector / density-matrix engine
``cooling``     cooling protocol, layouts, steady states, 1-qubit stabilizer
``eigenmodes``  free-fermion modes of the open Floquet Ising chain
``secular``     weak-coupling rate theory of the cooled steady state
``rdm``         one-body reduced density matrices and purification
``xxz``         boundary-driven Floquet XXZ transport
``prep``        unitary Gaussian-state preparation and the protocol comparison
``tfim``        exact chain references (ground energy, covariance, ED)
``config``      typed YAML configuration schema
``output``      self-describing CSV and run-manifest writer
``cli``         the ``floqcool`` command-line interface
``acceptance``  end-to-end validation battery
"""

__version__ = "0.1.0"
