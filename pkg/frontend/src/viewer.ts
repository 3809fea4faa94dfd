// WebGL viewport: renderer, camera, orbit navigation, node picking.

import * as THREE from 'three'
import { OrbitControls } from 'three/examples/jsm/controls/OrbitControls.js'
import { applyCameraHint, applyMouseContract } from './controls.js'
import { updateLabelDistance } from './labels.js'
import type { BuiltScene } from './scene-builder.js'
import type { CameraHint } from './types.js'

export interface Viewer {
  /** Swap in a freshly built scene and reframe the camera. */
  show(built: BuiltScene, hint: CameraHint): void
  onPick(handler: (pickId: string) => void): void
  resize(): void
  dispose(): void
}

export function createViewer(container: HTMLElement): Viewer {
  const renderer = new THREE.WebGLRenderer({ antialias: true })
  renderer.setPixelRatio(Math.min(window.devicePixelRatio, 2))
  renderer.setSize(container.clientWidth, container.clientHeight)
  renderer.setClearColor(0x14161c)
  container.appendChild(renderer.domElement)

  const scene = new THREE.Scene()
  const camera = new THREE.PerspectiveCamera(
    50,
    container.clientWidth / Math.max(1, container.clientHeight),
    0.1,
    2000,
  )
  camera.position.set(8, 6, 18)

  const controls = applyMouseContract(new OrbitControls(camera, renderer.domElement))
  controls.dampingFactor = 0.12

  scene.add(new THREE.HemisphereLight(0xffffff, 0x30343c, 1.0))
  const sun = new THREE.DirectionalLight(0xffffff, 1.6)
  sun.position.set(6, 14, 10)
  scene.add(sun)

  let current: BuiltScene | null = null
  let pickHandler: ((pickId: string) => void) | null = null

  const raycaster = new THREE.Raycaster()
  const pointer = new THREE.Vector2()
  const downAt = new THREE.Vector2()

  renderer.domElement.addEventListener('pointerdown', (event) => {
    downAt.set(event.clientX, event.clientY)
  })
  renderer.domElement.addEventListener('click', (event) => {
    // Drags end with a click too; only a still pointer counts as a pick.
    if (downAt.distanceTo(new THREE.Vector2(event.clientX, event.clientY)) > 4) return
    if (!current || !pickHandler) return
    const rect = renderer.domElement.getBoundingClientRect()
    pointer.set(
      ((event.clientX - rect.left) / rect.width) * 2 - 1,
      -((event.clientY - rect.top) / rect.height) * 2 + 1,
    )
    raycaster.setFromCamera(pointer, camera)
    const hit = raycaster.intersectObjects(current.pickables, false)[0]
    if (hit) pickHandler(hit.object.userData.pickId as string)
  })

  let disposed = false
  renderer.setAnimationLoop(() => {
    if (disposed) return
    controls.update()
    if (current) updateLabelDistance(current.captioned, camera.position)
    renderer.render(scene, camera)
  })

  return {
    show(built, hint) {
      if (current) scene.remove(current.root)
      current = built
      scene.add(built.root)
      applyCameraHint(camera, controls, hint)
    },
    onPick(handler) {
      pickHandler = handler
    },
    resize() {
      const width = container.clientWidth
      const height = Math.max(1, container.clientHeight)
      camera.aspect = width / height
      camera.updateProjectionMatrix()
      renderer.setSize(width, height)
    },
    dispose() {
      disposed = true
      renderer.setAnimationLoop(null)
      renderer.dispose()
      controls.dispose()
    },
  }
}
