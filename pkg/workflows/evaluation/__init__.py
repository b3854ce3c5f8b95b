from .evaluate import EvalResult, evaluate_checkpoint, stored_task

__all__ = ['EvalResult', 'evaluate_checkpoint', 'stored_task']
