"""Laboratory for the asymmetric simple exclusion process on Z under product
blocking measures: exact distribution evaluators, Gillespie simulation of the
two species basic coupling, and numerical/exact verification of the partition
identities behind the stationary laws."""

__version__ = "0.1.0"
