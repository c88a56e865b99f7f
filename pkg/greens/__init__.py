# 两点函数与无序修正核模块
from .kernels import (
    SpacetimeInterval, Regularization, DeltaTerm, KernelValue, DisorderModel,
    KernelSample, SplitKernel,
    feynman_free_ieps, feynman_free_split, wightman_free, wightman_free_split,
    disorder_F, disorder_I, disorder_I_sample, disorder_I_plus, disorder_I_plus_continued,
    uniform_prescription_defect,
    feynman_kernel, wightman_kernel, disorder_kernel, disorder_plus_kernel,
    FOUR_PI_SQ, DISORDER_PREFACTOR
)

__all__ = [
    'SpacetimeInterval', 'Regularization', 'DeltaTerm', 'KernelValue', 'DisorderModel',
    'KernelSample', 'SplitKernel',
    'feynman_free_ieps', 'feynman_free_split', 'wightman_free', 'wightman_free_split',
    'disorder_F', 'disorder_I', 'disorder_I_sample', 'disorder_I_plus', 'disorder_I_plus_continued',
    'uniform_prescription_defect',
    'feynman_kernel', 'wightman_kernel', 'disorder_kernel', 'disorder_plus_kernel',
    'FOUR_PI_SQ', 'DISORDER_PREFACTOR'
]
