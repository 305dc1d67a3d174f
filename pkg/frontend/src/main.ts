import { createApp } from './app.js'
import { DEFAULT_API_BASE } from './constants.js'

function boot(): void {
    const root = document.getElementById('app')
    if (!root) return
    const apiBase = new URLSearchParams(location.search).get('api') ?? DEFAULT_API_BASE
    const app = createApp(root, {
        apiBase,
        onFragmentChange: (fragment) => history.replaceState(null, '', fragment),
    })
    window.addEventListener('hashchange', () => {
        app.restore(location.hash)
        void app.refreshParam()
        void app.refreshJulia()
    })
    void app.start(location.hash)
}

if (document.readyState === 'loading') {
    document.addEventListener('DOMContentLoaded', boot)
} else {
    boot()
}
