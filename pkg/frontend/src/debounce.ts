// Trailing-edge debounce with a cancel handle, so a burst of keypresses
// produces a single prediction request.

export function debounce<T extends (...args: Parameters<T>) => void>(
  fn: T,
  delayMs: number,
): T & { cancel: () => void; flush: (...args: Parameters<T>) => void } {
  let timer: ReturnType<typeof setTimeout> | null = null;

  const debounced = ((...args: Parameters<T>) => {
    if (timer !== null) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, delayMs);
  }) as T & { cancel: () => void; flush: (...args: Parameters<T>) => void };

  debounced.cancel = () => {
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
    }
  };

  // Run immediately, dropping any queued call.
  debounced.flush = (...args: Parameters<T>) => {
    debounced.cancel();
    fn(...args);
  };

  return debounced;
}
